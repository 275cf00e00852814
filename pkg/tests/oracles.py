"""Reference computations that share no code with the package.

Each one uses a different method from the implementation it checks:
exact rational arithmetic, arbitrary-precision matrix exponentials, a
fixed-step RK4 loop, and plain bisection.
"""

from fractions import Fraction
import math

import mpmath


def passage_time_exact(k, lam, mu):
    """E[time from S_0 to S_k] for the constant-rate chain, exact.

    Uses the one-step recursion for birth-death chains: the expected time
    T_i to move from i to i+1 satisfies u_i T_i = 1 + d_i T_{i-1}.
    Rates are converted to Fractions from their decimal strings.
    """
    lam, mu = Fraction(str(lam)), Fraction(str(mu))
    total, prev = Fraction(0), Fraction(0)
    for i in range(k):
        up, down = (k - i) * lam, i * mu
        prev = (1 + down * prev) / up
        total += prev
    return total


def generator_rows(k, lam, mu):
    """Rate matrix of the absorbing chain as nested lists."""
    q = [[0.0] * (k + 1) for _ in range(k + 1)]
    for i in range(k):
        q[i][i + 1] = (k - i) * lam
        if i:
            q[i][i - 1] = i * mu
        q[i][i] = -sum(q[i])
    return q


def occupancy_expm(k, lam, mu, t, dps=40):
    """p(t) = e_0 exp(Q t) evaluated with mpmath at ``dps`` digits."""
    with mpmath.workdps(dps):
        q = mpmath.matrix(generator_rows(k, lam, mu))
        e = mpmath.expm(q * t)
        return [float(e[0, j]) for j in range(k + 1)]


def rk4_literal_k1(lam, mu, dt=1e-4, t_max=100.0):
    """Fixed-step RK4 for the k = 1 equations with the return term kept.

    State (a, p0, p1, cum), cum' = 1 - p1. Stops when p1 reaches 1 and
    interpolates the crossing linearly inside the last step. Returns the
    accumulated integral at that point.
    """
    def f(y):
        a, p0, p1, _ = y
        ac = min(max(a, 0.0), 1.0)
        l, m = lam(ac), mu(ac)
        return ((1 - a) * l - a * m, p1 * m - p0 * l, p0 * l, 1 - p1)

    y = (0.0, 1.0, 0.0, 0.0)
    t = 0.0
    while t < t_max:
        k1 = f(y)
        k2 = f(tuple(v + 0.5 * dt * d for v, d in zip(y, k1)))
        k3 = f(tuple(v + 0.5 * dt * d for v, d in zip(y, k2)))
        k4 = f(tuple(v + dt * d for v, d in zip(y, k3)))
        new = tuple(v + dt / 6 * (a + 2 * b + 2 * c + d)
                    for v, a, b, c, d in zip(y, k1, k2, k3, k4))
        if new[2] >= 1.0:
            w = (1.0 - y[2]) / (new[2] - y[2])
            return y[3] + w * (new[3] - y[3])
        y, t = new, t + dt
    raise RuntimeError("p1 never reached 1")


def rk4_activation(lam, mu, t_end, dt=1e-3):
    """Activation fraction at ``t_end`` by fixed-step RK4."""
    def f(a):
        return (1 - a) * lam(a) - a * mu(a)

    a, t = 0.0, 0.0
    n = int(round(t_end / dt))
    h = t_end / n
    for _ in range(n):
        k1 = f(a)
        k2 = f(a + 0.5 * h * k1)
        k3 = f(a + 0.5 * h * k2)
        k4 = f(a + h * k3)
        a += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return a


def bisect(f, lo, hi, tol=1e-14):
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def pearson_edge_degrees(n, edges):
    """Degree assortativity from first principles over both orientations."""
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    xs, ys = [], []
    for u, v in edges:
        xs += [deg[u], deg[v]]
        ys += [deg[v], deg[u]]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = sum((x - mx) ** 2 for x in xs)
    vy = sum((y - my) ** 2 for y in ys)
    return cov / math.sqrt(vx * vy)
