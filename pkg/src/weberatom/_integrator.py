"""Compiled fixed-step implicit Runge-Kutta kernel for the polar two-charge flow.

Gauss collocation schemes (implicit midpoint, 2-stage Gauss-Legendre) are
symplectic; the stage equations are solved by Newton iteration on the flow
field with a finite-difference Jacobian, refreshed when convergence stalls.
The p_phi component of the flow is identically zero, so the Newton solve
drives the p_phi stage derivatives to exact zero and angular momentum is
conserved bit-for-bit.

State layout: y = (r, phi, p_r, p_phi).  Model encoding: a2 = alpha^2 entering
the kinetic metric (0 for Coulomb), s = +1 electron-proton / -1 proton-proton,
so g_rr = 1 + s*a2/r and the potential is -s/r.

Status codes returned by _integrate:
    0 ok, 1 Newton failure, 2 collision (r <= r_floor),
    3 critical-radius crossing (proton-proton), 4 step too large (|dphi| >= pi).
"""

import numpy as np
from numba import njit

SQRT3 = np.sqrt(3.0)

MIDPOINT_A = np.array([[0.5]])
MIDPOINT_B = np.array([1.0])
MIDPOINT_C = np.array([0.5])

GL4_A = np.array([[0.25, 0.25 - SQRT3 / 6.0], [0.25 + SQRT3 / 6.0, 0.25]])
GL4_B = np.array([0.5, 0.5])
GL4_C = np.array([0.5 - SQRT3 / 6.0, 0.5 + SQRT3 / 6.0])

STATUS_OK = 0
STATUS_NEWTON_FAIL = 1
STATUS_COLLISION = 2
STATUS_CROSSING = 3
STATUS_STEP_TOO_LARGE = 4


@njit(cache=True)
def _flow(y, a2, s, out):
    r = y[0]
    p_r = y[2]
    p_phi = y[3]
    denom = r + s * a2
    out[0] = (r / denom) * p_r
    out[1] = p_phi / (r * r)
    out[2] = -s * a2 * p_r * p_r / (2.0 * denom * denom) + p_phi * p_phi / (r * r * r) - s / (r * r)
    out[3] = 0.0


@njit(cache=True)
def _energy(y, a2, s):
    r = y[0]
    return 0.5 * (r / (r + s * a2)) * y[2] * y[2] + y[3] * y[3] / (2.0 * r * r) - s / r


@njit(cache=True)
def _lu_factor(m, piv):
    n = m.shape[0]
    for k in range(n):
        p = k
        mx = abs(m[k, k])
        for i in range(k + 1, n):
            if abs(m[i, k]) > mx:
                mx = abs(m[i, k])
                p = i
        piv[k] = p
        if p != k:
            for j in range(n):
                tmp = m[k, j]
                m[k, j] = m[p, j]
                m[p, j] = tmp
        if m[k, k] == 0.0:
            return False
        for i in range(k + 1, n):
            m[i, k] /= m[k, k]
            lik = m[i, k]
            for j in range(k + 1, n):
                m[i, j] -= lik * m[k, j]
    return True


@njit(cache=True)
def _lu_solve(m, piv, b):
    n = m.shape[0]
    for k in range(n):
        p = piv[k]
        if p != k:
            tmp = b[k]
            b[k] = b[p]
            b[p] = tmp
        for i in range(k + 1, n):
            b[i] -= m[i, k] * b[k]
    for i in range(n - 1, -1, -1):
        acc = b[i]
        for j in range(i + 1, n):
            acc -= m[i, j] * b[j]
        b[i] = acc / m[i, i]


@njit(cache=True)
def _build_jacobian(stages_y, y_ref, a2, s, h, tab_a, jac, f_base, f_pert, work):
    """Finite-difference Jacobian of G(Y) = Y - y - h A f(Y) at the current stages."""
    ns = stages_y.shape[0]
    d = 4
    nd = ns * d
    for i in range(nd):
        for j in range(nd):
            jac[i, j] = 0.0
    for bj in range(ns):
        _flow(stages_y[bj], a2, s, f_base)
        for jj in range(d):
            eps = 1e-7 * (1.0 + abs(stages_y[bj, jj]))
            for q in range(d):
                work[q] = stages_y[bj, q]
            work[jj] += eps
            _flow(work, a2, s, f_pert)
            for bi in range(ns):
                ha = h * tab_a[bi, bj]
                for ii in range(d):
                    jac[bi * d + ii, bj * d + jj] -= ha * (f_pert[ii] - f_base[ii]) / eps
    for q in range(nd):
        jac[q, q] += 1.0


@njit(cache=True)
def _stage_status(stages_y, r_floor, rho, check_crossing, side0):
    """Collision / crossing detection on the implicit stage values: a stage
    radius at the floor or across the critical radius means the step itself
    straddles the singular set."""
    for i in range(stages_y.shape[0]):
        r = stages_y[i, 0]
        if r <= r_floor:
            return STATUS_COLLISION
        if check_crossing:
            side = 1.0
            if r < rho:
                side = -1.0
            if side != side0:
                return STATUS_CROSSING
    return STATUS_OK


@njit(cache=True)
def _integrate(y0, a2, s, h, n_steps, tab_a, tab_b, tab_c,
               newton_tol, max_iters, stride, r_floor, rho, check_crossing):
    ns = tab_b.shape[0]
    d = 4
    nd = ns * d
    n_out = n_steps // stride + 2
    ts = np.empty(n_out)
    ys = np.empty((n_out, d))
    y = y0.copy()
    ts[0] = 0.0
    ys[0] = y0
    count = 1

    f0 = np.empty(d)
    f_base = np.empty(d)
    f_pert = np.empty(d)
    work = np.empty(d)
    stages_y = np.empty((ns, d))
    stages_f = np.empty((ns, d))
    resid = np.empty(nd)
    jac = np.empty((nd, nd))
    piv = np.empty(nd, dtype=np.int64)

    e0 = _energy(y0, a2, s)
    max_de = 0.0
    max_dpphi = 0.0
    side0 = 1.0
    if check_crossing and y0[0] < rho:
        side0 = -1.0

    status = STATUS_OK
    t_fail = 0.0

    for step in range(n_steps):
        # explicit Euler predictor for the stage values
        _flow(y, a2, s, f0)
        for i in range(ns):
            for j in range(d):
                stages_y[i, j] = y[j] + h * tab_c[i] * f0[j]

        stage_bad = _stage_status(stages_y, r_floor, rho, check_crossing, side0)
        converged = False
        if stage_bad == STATUS_OK:
            _build_jacobian(stages_y, y, a2, s, h, tab_a, jac, f_base, f_pert, work)
            if _lu_factor(jac, piv):
                for it in range(max_iters):
                    for i in range(ns):
                        _flow(stages_y[i], a2, s, stages_f[i])
                    for bi in range(ns):
                        for ii in range(d):
                            acc = stages_y[bi, ii] - y[ii]
                            for bj in range(ns):
                                acc -= h * tab_a[bi, bj] * stages_f[bj, ii]
                            resid[bi * d + ii] = acc
                    _lu_solve(jac, piv, resid)
                    dmax = 0.0
                    for bi in range(ns):
                        for ii in range(d):
                            stages_y[bi, ii] -= resid[bi * d + ii]
                            if abs(resid[bi * d + ii]) > dmax:
                                dmax = abs(resid[bi * d + ii])
                    stage_bad = _stage_status(stages_y, r_floor, rho, check_crossing, side0)
                    if stage_bad != STATUS_OK:
                        break
                    if not np.isfinite(dmax):
                        break
                    if dmax < newton_tol:
                        converged = True
                        break
                    if it > 0 and (it + 1) % 5 == 0:
                        # stalled: refresh the frozen Jacobian at the current stages
                        _build_jacobian(stages_y, y, a2, s, h, tab_a, jac, f_base, f_pert, work)
                        if not _lu_factor(jac, piv):
                            break
        if stage_bad != STATUS_OK:
            status = stage_bad
            t_fail = (step + 1) * h
            break
        if not converged:
            status = STATUS_NEWTON_FAIL
            t_fail = step * h
            break

        for i in range(ns):
            _flow(stages_y[i], a2, s, stages_f[i])
        phi_old = y[1]
        for j in range(d):
            acc = 0.0
            for i in range(ns):
                acc += tab_b[i] * stages_f[i, j]
            y[j] += h * acc
        t_now = (step + 1) * h

        if abs(y[1] - phi_old) >= np.pi:
            status = STATUS_STEP_TOO_LARGE
            t_fail = t_now
            break
        if y[0] <= r_floor:
            status = STATUS_COLLISION
            t_fail = t_now
            break
        if check_crossing:
            side = 1.0
            if y[0] < rho:
                side = -1.0
            if side != side0:
                status = STATUS_CROSSING
                t_fail = t_now
                break

        de = abs(_energy(y, a2, s) - e0)
        if de > max_de:
            max_de = de
        dp = abs(y[3] - y0[3])
        if dp > max_dpphi:
            max_dpphi = dp

        if (step + 1) % stride == 0 or step + 1 == n_steps:
            ts[count] = t_now
            ys[count] = y
            count += 1

    return ts[:count], ys[:count], max_de, max_dpphi, status, t_fail
