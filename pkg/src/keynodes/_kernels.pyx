# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: the Dormand-Prince stepper for the coupled
activation/occupancy system and the Gillespie event loop.

Both functions mirror ``keynodes._fallback`` line for line; any change here
must be made there too.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, log1p, pow, sqrt, fabs, isnan, isfinite, NAN

cnp.import_array()

cdef enum:
    MAXDIM = 64

# Dormand-Prince 5(4) tableau
cdef double A21 = 1.0 / 5.0
cdef double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0
cdef double A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0
cdef double A71 = 35.0 / 384.0, A73 = 500.0 / 1113.0, A74 = 125.0 / 192.0
cdef double A75 = -2187.0 / 6784.0, A76 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0
cdef double D1 = -12715105075.0 / 11282082432.0, D3 = 87487479700.0 / 32700410799.0
cdef double D4 = -10690763975.0 / 1880347072.0, D5 = 701980252875.0 / 199316789632.0
cdef double D6 = -1453857185.0 / 822651844.0, D7 = 69997945.0 / 29380423.0

cdef double EPS = 2.220446049250313e-16


cdef inline double rate(int code, double c, double x, double a) noexcept nogil:
    if code == 0:
        return c
    elif code == 1:
        return c * exp(x * a)
    elif code == 2:
        return c * pow(a + 1.0, x)
    elif code == 3:
        return c * log(x + a)
    return c / log(x + a)


cdef inline void rhs(double *y, double *dy, int dim, int k, int literal,
                     int lc, double lp0, double lp1,
                     int mc, double mp0, double mp1) noexcept nogil:
    cdef double a = y[0]
    cdef double ac = a
    cdef double lam, mu, up, down
    cdef int i
    if ac < 0.0:
        ac = 0.0
    elif ac > 1.0:
        ac = 1.0
    lam = rate(lc, lp0, lp1, ac)
    mu = rate(mc, mp0, mp1, ac)
    dy[0] = (1.0 - a) * lam - a * mu
    if k == 0:
        return
    for i in range(k + 1):
        dy[1 + i] = 0.0
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


cdef double wrms(double *v, double *y0, double *y1, int dim,
                 double rtol, double atol) noexcept nogil:
    cdef double acc = 0.0, sc, m
    cdef int i
    for i in range(dim):
        m = fabs(y0[i])
        if fabs(y1[i]) > m:
            m = fabs(y1[i])
        sc = atol + rtol * m
        acc += (v[i] / sc) * (v[i] / sc)
    return sqrt(acc / dim)


def integrate(int lc, double lp0, double lp1, int mc, double mp0, double mp1,
              int k, int literal, double t_end, double rtol, double atol,
              int stop_index, double stop_value, long max_steps):
    """Integrate from t=0 to ``t_end`` or until ``y[stop_index] >= stop_value``.

    Returns ``(status, ts, ys, cont)`` where ``cont[n]`` holds the five
    dense-output coefficient vectors of step ``n``. Status codes: 0 reached
    ``t_end``, 1 stop condition met, 2 step size underflow, 3 ``max_steps``
    exhausted, 4 non-finite state.
    """
    cdef int dim = 1 if k == 0 else k + 3
    if dim > MAXDIM:
        raise ValueError(f"state dimension {dim} exceeds {MAXDIM}")
    cdef double y[MAXDIM]
    cdef double ynew[MAXDIM]
    cdef double ytmp[MAXDIM]
    cdef double k1[MAXDIM]
    cdef double k2[MAXDIM]
    cdef double k3[MAXDIM]
    cdef double k4[MAXDIM]
    cdef double k5[MAXDIM]
    cdef double k6[MAXDIM]
    cdef double k7[MAXDIM]
    cdef double err[MAXDIM]
    cdef int i
    cdef long cap = 256, n = 0, steps = 0
    cdef double t = 0.0, h, hnew, errn, fac, d0, d1, d2, h0, h1, dmax
    cdef bint rejected = False
    cdef int status = 0

    ts_arr = np.empty(cap + 1)
    ys_arr = np.empty((cap + 1, dim))
    cont_arr = np.empty((cap, 5, dim))
    cdef double[::1] ts = ts_arr
    cdef double[:, ::1] ys = ys_arr
    cdef double[:, :, ::1] cont = cont_arr

    for i in range(dim):
        y[i] = 0.0
    if k > 0:
        y[1] = 1.0
    ts[0] = 0.0
    for i in range(dim):
        ys[0, i] = y[i]

    rhs(y, k1, dim, k, literal, lc, lp0, lp1, mc, mp0, mp1)

    # initial step (Hairer & Wanner, II.4)
    for i in range(dim):
        err[i] = y[i]
    d0 = wrms(err, y, y, dim, rtol, atol)
    d1 = wrms(k1, y, y, dim, rtol, atol)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    if h0 > t_end:
        h0 = t_end
    for i in range(dim):
        ytmp[i] = y[i] + h0 * k1[i]
    rhs(ytmp, k2, dim, k, literal, lc, lp0, lp1, mc, mp0, mp1)
    for i in range(dim):
        err[i] = k2[i] - k1[i]
    d2 = wrms(err, y, y, dim, rtol, atol) / h0
    dmax = d1 if d1 > d2 else d2
    if dmax <= 1e-15:
        h1 = h0 * 1e-3
        if h1 < 1e-6:
            h1 = 1e-6
    else:
        h1 = pow(0.01 / dmax, 0.2)
    h = 100.0 * h0
    if h1 < h:
        h = h1

    with nogil:
        while True:
            if steps >= max_steps:
                status = 3
                break
            if h >= t_end - t:
                h = t_end - t
            if h < 10.0 * EPS * (fabs(t) if fabs(t) > 1.0 else 1.0):
                status = 2
                break
            steps += 1

            for i in range(dim):
                ytmp[i] = y[i] + h * A21 * k1[i]
            rhs(ytmp, k2, dim, k, literal, lc, lp0, lp1, mc, mp0, mp1)
            for i in range(dim):
                ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i])
            rhs(ytmp, k3, dim, k, literal, lc, lp0, lp1, mc, mp0, mp1)
            for i in range(dim):
                ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
            rhs(ytmp, k4, dim, k, literal, lc, lp0, lp1, mc, mp0, mp1)
            for i in range(dim):
                ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i]
                                      + A54 * k4[i])
            rhs(ytmp, k5, dim, k, literal, lc, lp0, lp1, mc, mp0, mp1)
            for i in range(dim):
                ytmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i]
                                      + A64 * k4[i] + A65 * k5[i])
            rhs(ytmp, k6, dim, k, literal, lc, lp0, lp1, mc, mp0, mp1)
            for i in range(dim):
                ynew[i] = y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i]
                                      + A75 * k5[i] + A76 * k6[i])
            rhs(ynew, k7, dim, k, literal, lc, lp0, lp1, mc, mp0, mp1)
            for i in range(dim):
                err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i]
                              + E6 * k6[i] + E7 * k7[i])
            errn = wrms(err, y, ynew, dim, rtol, atol)
            if not isfinite(errn):
                status = 4
                break

            if errn > 1.0:
                fac = 0.9 * pow(errn, -0.2)
                if fac < 0.2:
                    fac = 0.2
                h = h * fac
                rejected = True
                continue

            # accepted
            if n >= cap:
                with gil:
                    cap *= 2
                    ts_arr = np.resize(ts_arr, cap + 1)
                    ys_arr = np.concatenate([ys_arr, np.empty((cap + 1 - ys_arr.shape[0], dim))])
                    cont_arr = np.concatenate([cont_arr, np.empty((cap - cont_arr.shape[0], 5, dim))])
                    ts = ts_arr
                    ys = ys_arr
                    cont = cont_arr
            for i in range(dim):
                cont[n, 0, i] = y[i]
                cont[n, 1, i] = ynew[i] - y[i]
                cont[n, 2, i] = h * k1[i] - cont[n, 1, i]
                cont[n, 3, i] = cont[n, 1, i] - h * k7[i] - cont[n, 2, i]
                cont[n, 4, i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i]
                                     + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
            if h >= t_end - t:
                t = t_end
            else:
                t = t + h
            n += 1
            ts[n] = t
            for i in range(dim):
                y[i] = ynew[i]
                k1[i] = k7[i]
                ys[n, i] = y[i]

            if stop_index >= 0 and y[stop_index] >= stop_value:
                status = 1
                break
            if t >= t_end:
                status = 0
                break

            if errn == 0.0:
                fac = 10.0
            else:
                fac = 0.9 * pow(errn, -0.2)
                if fac > 10.0:
                    fac = 10.0
                elif fac < 0.2:
                    fac = 0.2
            if rejected and fac > 1.0:
                fac = 1.0
            rejected = False
            h = h * fac

    return status, ts_arr[:n + 1].copy(), ys_arr[:n + 1].copy(), cont_arr[:n].copy()


# ---------------------------------------------------------------------------
# Gillespie event loop
# ---------------------------------------------------------------------------

cdef inline double node_rate(unsigned char xi, int cnt, int deg,
                             int lc, double lp0, double lp1,
                             int mc, double mp0, double mp1) noexcept nogil:
    cdef double a = <double>cnt / <double>deg
    if xi == 0:
        return rate(lc, lp0, lp1, a)
    return rate(mc, mp0, mp1, a)


cdef inline void tree_set(double *tree, long size, long i, double v) noexcept nogil:
    cdef long p = size + i
    tree[p] = v
    p >>= 1
    while p >= 1:
        tree[p] = tree[2 * p] + tree[2 * p + 1]
        p >>= 1


def advance(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices, const cnp.int64_t[::1] deg,
            int lc, double lp0, double lp1, int mc, double mp0, double mp1,
            const cnp.int64_t[::1] key_rank, long need_active, double horizon,
            const double[::1] curve_times,
            unsigned char[::1] x, cnp.int64_t[::1] cnt, double[::1] tree,
            cnp.int64_t[::1] curve_counts, cnp.int64_t[::1] key_counts, double[::1] key_times,
            double[::1] fstate, cnp.int64_t[::1] istate, const double[::1] uniforms):
    """Run events until done, horizon, or the uniform buffer is exhausted.

    ``fstate = [t, tau_gamma]``, ``istate = [active, next_curve]``.
    Returns 0 when more uniforms are needed, 1 when every target and curve
    point is recorded, 2 when the horizon was reached first.
    """
    cdef long n = x.shape[0]
    cdef long size = tree.shape[0] // 2
    cdef long nk = key_counts.shape[0]
    cdef long ncurve = curve_times.shape[0]
    cdef long nu = uniforms.shape[0]
    cdef long pos = 0, p, i, j, e, r
    cdef double t = fstate[0]
    cdef double tau_gamma = fstate[1]
    cdef long active = istate[0]
    cdef long next_curve = istate[1]
    cdef double R, u1, u2, target, tnew
    cdef int delta
    cdef int status = 0
    cdef double *tr = &tree[0]

    with nogil:
        while pos + 1 < nu:
            R = tr[1]
            u1 = uniforms[pos]
            u2 = uniforms[pos + 1]
            pos += 2
            tnew = t - log1p(-u1) / R
            while next_curve < ncurve and curve_times[next_curve] < tnew:
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
            i = p - size
            if i >= n:
                i = n - 1

            if x[i] == 0:
                x[i] = 1
                delta = 1
            else:
                x[i] = 0
                delta = -1
            active += delta
            tree_set(tr, size, i, node_rate(x[i], cnt[i], <int>deg[i],
                                            lc, lp0, lp1, mc, mp0, mp1))
            for e in range(indptr[i], indptr[i + 1]):
                j = indices[e]
                cnt[j] += delta
                tree_set(tr, size, j, node_rate(x[j], cnt[j], <int>deg[j],
                                                lc, lp0, lp1, mc, mp0, mp1))

            r = key_rank[i]
            if r >= 0:
                for j in range(r, nk):
                    key_counts[j] += delta
                    if delta > 0 and key_counts[j] == j + 1 and isnan(key_times[j]):
                        key_times[j] = t
            if isnan(tau_gamma) and active >= need_active:
                tau_gamma = t
            if (not isnan(tau_gamma)) and (not isnan(key_times[nk - 1])) \
                    and next_curve >= ncurve:
                status = 1
                break

    fstate[0] = t
    fstate[1] = tau_gamma
    istate[0] = active
    istate[1] = next_curve
    return status
