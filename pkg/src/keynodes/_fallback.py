"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``.

Same algorithms, same operation order, same return conventions. Selected
automatically when the extension module is not built, or forced with
``KEYNODES_PURE=1``.
"""

import math

import numpy as np

A21 = 1.0 / 5.0
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
A51, A52, A53, A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
A61, A62, A63 = 9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0
A64, A65 = 49.0 / 176.0, -5103.0 / 18656.0
A71, A73, A74 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0
A75, A76 = -2187.0 / 6784.0, 11.0 / 84.0
E1, E3, E4 = 71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0
E5, E6, E7 = -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0
D1, D3 = -12715105075.0 / 11282082432.0, 87487479700.0 / 32700410799.0
D4, D5 = -10690763975.0 / 1880347072.0, 701980252875.0 / 199316789632.0
D6, D7 = -1453857185.0 / 822651844.0, 69997945.0 / 29380423.0

EPS = 2.220446049250313e-16


def rate(code, c, x, a):
    if code == 0:
        return c
    if code == 1:
        return c * math.exp(x * a)
    if code == 2:
        return c * math.pow(a + 1.0, x)
    if code == 3:
        return c * math.log(x + a)
    return c / math.log(x + a)


def _make_rhs(k, literal, lc, lp0, lp1, mc, mp0, mp1):
    def rhs(y):
        a = y[0]
        ac = 0.0 if a < 0.0 else (1.0 if a > 1.0 else a)
        lam = rate(lc, lp0, lp1, ac)
        mu = rate(mc, mp0, mp1, ac)
        dy = [0.0] * len(y)
        dy[0] = (1.0 - a) * lam - a * mu
        if k == 0:
            return dy
        for i in range(k):
            up = (k - i) * lam * y[1 + i]
            dy[1 + i] -= up
            dy[2 + i] += up
            if i > 0:
                down = i * mu * y[1 + i]
                dy[1 + i] -= down
                dy[i] += down
        if literal:
            dy[1] += y[2] * mu
        dy[k + 2] = 1.0 - y[k + 1]
        return dy

    return rhs


def _wrms(v, y0, y1, rtol, atol):
    acc = 0.0
    for vi, a, b in zip(v, y0, y1):
        sc = atol + rtol * max(abs(a), abs(b))
        acc += (vi / sc) * (vi / sc)
    return math.sqrt(acc / len(v))


def integrate(lc, lp0, lp1, mc, mp0, mp1, k, literal, t_end, rtol, atol,
              stop_index, stop_value, max_steps):
    dim = 1 if k == 0 else k + 3
    rhs = _make_rhs(k, literal, lc, lp0, lp1, mc, mp0, mp1)
    y = [0.0] * dim
    if k > 0:
        y[1] = 1.0
    ts = [0.0]
    ys = [list(y)]
    conts = []

    k1 = rhs(y)
    d0 = _wrms(y, y, y, rtol, atol)
    d1 = _wrms(k1, y, y, rtol, atol)
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, t_end)
    k2 = rhs([yi + h0 * f for yi, f in zip(y, k1)])
    d2 = _wrms([b - a for a, b in zip(k1, k2)], y, y, rtol, atol) / h0
    dmax = max(d1, d2)
    if dmax <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = math.pow(0.01 / dmax, 0.2)
    h = min(100.0 * h0, h1)

    t = 0.0
    steps = 0
    rejected = False
    status = 0
    rng = range(dim)
    while True:
        if steps >= max_steps:
            status = 3
            break
        if h >= t_end - t:
            h = t_end - t
        if h < 10.0 * EPS * max(abs(t), 1.0):
            status = 2
            break
        steps += 1

        k2 = rhs([y[i] + h * A21 * k1[i] for i in rng])
        k3 = rhs([y[i] + h * (A31 * k1[i] + A32 * k2[i]) for i in rng])
        k4 = rhs([y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]) for i in rng])
        k5 = rhs([y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i]
                              + A54 * k4[i]) for i in rng])
        k6 = rhs([y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i]
                              + A64 * k4[i] + A65 * k5[i]) for i in rng])
        ynew = [y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i]
                            + A75 * k5[i] + A76 * k6[i]) for i in rng]
        k7 = rhs(ynew)
        err = [h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i]
                    + E6 * k6[i] + E7 * k7[i]) for i in rng]
        errn = _wrms(err, y, ynew, rtol, atol)
        if not math.isfinite(errn):
            status = 4
            break

        if errn > 1.0:
            h = h * max(0.2, 0.9 * math.pow(errn, -0.2))
            rejected = True
            continue

        c1 = [ynew[i] - y[i] for i in rng]
        c2 = [h * k1[i] - c1[i] for i in rng]
        c3 = [c1[i] - h * k7[i] - c2[i] for i in rng]
        c4 = [h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i]
                   + D6 * k6[i] + D7 * k7[i]) for i in rng]
        conts.append([list(y), c1, c2, c3, c4])
        t = t_end if h >= t_end - t else t + h
        ts.append(t)
        y = ynew
        k1 = k7
        ys.append(list(y))

        if stop_index >= 0 and y[stop_index] >= stop_value:
            status = 1
            break
        if t >= t_end:
            status = 0
            break

        if errn == 0.0:
            fac = 10.0
        else:
            fac = min(10.0, max(0.2, 0.9 * math.pow(errn, -0.2)))
        if rejected and fac > 1.0:
            fac = 1.0
        rejected = False
        h = h * fac

    cont = np.array(conts, dtype=float).reshape(len(conts), 5, dim)
    return status, np.array(ts), np.array(ys, dtype=float).reshape(-1, dim), cont


def _tree_set(tree, size, i, v):
    p = size + i
    tree[p] = v
    p >>= 1
    while p >= 1:
        tree[p] = tree[2 * p] + tree[2 * p + 1]
        p >>= 1


def advance(indptr, indices, deg, lc, lp0, lp1, mc, mp0, mp1, key_rank,
            need_active, horizon, curve_times, x, cnt, tree, curve_counts,
            key_counts, key_times, fstate, istate, uniforms):
    n = x.shape[0]
    size = tree.shape[0] // 2
    nk = key_counts.shape[0]
    ncurve = curve_times.shape[0]
    nu = uniforms.shape[0]
    # work on Python lists, write back at the end
    tr = tree.tolist()
    xs = x.tolist()
    cn = cnt.tolist()
    dg = deg.tolist()
    ip = indptr.tolist()
    ix = indices.tolist()
    kr = key_rank.tolist()
    ct = curve_times.tolist()
    kc = key_counts.tolist()
    kt = key_times.tolist()
    us = uniforms.tolist()
    t = float(fstate[0])
    tau_gamma = float(fstate[1])
    active = int(istate[0])
    next_curve = int(istate[1])
    status = 0
    pos = 0
    isnan = math.isnan

    def node_rate(xi, c, d):
        a = c / d
        if xi == 0:
            return rate(lc, lp0, lp1, a)
        return rate(mc, mp0, mp1, a)

    while pos + 1 < nu:
        R = tr[1]
        u1 = us[pos]
        u2 = us[pos + 1]
        pos += 2
        tnew = t - math.log1p(-u1) / R
        while next_curve < ncurve and ct[next_curve] < tnew:
            curve_counts[next_curve] = active
            next_curve += 1
        if tnew > horizon:
            t = horizon
            status = 2
            break
        t = tnew

        target = u2 * R
        p = 1
        while p < size:
            if target < tr[2 * p]:
                p = 2 * p
            else:
                target -= tr[2 * p]
                p = 2 * p + 1
        i = min(p - size, n - 1)

        if xs[i] == 0:
            xs[i] = 1
            delta = 1
        else:
            xs[i] = 0
            delta = -1
        active += delta
        _tree_set(tr, size, i, node_rate(xs[i], cn[i], dg[i]))
        for e in range(ip[i], ip[i + 1]):
            j = ix[e]
            cn[j] += delta
            _tree_set(tr, size, j, node_rate(xs[j], cn[j], dg[j]))

        r = kr[i]
        if r >= 0:
            for j in range(r, nk):
                kc[j] += delta
                if delta > 0 and kc[j] == j + 1 and isnan(kt[j]):
                    kt[j] = t
        if isnan(tau_gamma) and active >= need_active:
            tau_gamma = t
        if not isnan(tau_gamma) and not isnan(kt[nk - 1]) and next_curve >= ncurve:
            status = 1
            break

    tree[:] = tr
    x[:] = xs
    cnt[:] = cn
    key_counts[:] = kc
    key_times[:] = kt
    fstate[0] = t
    fstate[1] = tau_gamma
    istate[0] = active
    istate[1] = next_curve
    return status
