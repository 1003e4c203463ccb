"""Numba backend: one compiled loop tracks each path start-to-finish.

All inner machinery (monomial evaluation, Jacobian assembly, LU solves)
is hand-rolled so a path never leaves compiled code; the GIL is released,
so chunked thread dispatch scales across cores.
"""

import numpy as np
from numba import njit

from . import STATUS_DIVERGED, STATUS_FAILED, STATUS_OK, STATUS_SUSPECT


@njit(cache=True, nogil=True)
def _eval_monos(x, exps, mono_ptr, mono_var, mono_exp, mono):
    T = exps.shape[0]
    for t in range(T):
        val = 1.0 + 0.0j
        for i in range(mono_ptr[t], mono_ptr[t + 1]):
            xv = x[mono_var[i]]
            e = mono_exp[i]
            p = xv
            for _ in range(e - 1):
                p *= xv
            val *= p
        mono[t] = val


@njit(cache=True, nogil=True)
def _eval_H(CA, CB, s, mono, n_active, H):
    neq = CA.shape[0]
    for d in range(neq):
        acc = 0.0 + 0.0j
        for t in range(n_active):
            acc += (CA[d, t] + s * CB[d, t]) * mono[t]
        H[d] = acc


@njit(cache=True, nogil=True)
def _eval_Hs(CB, mono, n_active, Hs):
    neq = CB.shape[0]
    for d in range(neq):
        acc = 0.0 + 0.0j
        for t in range(n_active):
            acc += CB[d, t] * mono[t]
        Hs[d] = acc


@njit(cache=True, nogil=True)
def _eval_J(CA, CB, s, mono, var_ptr, var_term, var_fac, var_didx, J):
    neq, n = J.shape[0], J.shape[1]
    for d in range(neq):
        for v in range(n):
            J[d, v] = 0.0 + 0.0j
    for v in range(n):
        for i in range(var_ptr[v], var_ptr[v + 1]):
            t = var_term[i]
            w = var_fac[i] * mono[var_didx[i]]
            for d in range(neq):
                J[d, v] += (CA[d, t] + s * CB[d, t]) * w

@njit(cache=True, nogil=True)
def _lu_solve(A, b, x):
    """Solve A x = b in place (A, b are scratch); returns False when singular."""
    n = A.shape[0]
    for k in range(n):
        p = k
        mx = abs(A[k, k])
        for i in range(k + 1, n):
            a = abs(A[i, k])
            if a > mx:
                mx = a
                p = i
        if mx == 0.0:
            return False
        if p != k:
            for j in range(k, n):
                tmp = A[k, j]
                A[k, j] = A[p, j]
                A[p, j] = tmp
            tmp = b[k]
            b[k] = b[p]
            b[p] = tmp
        akk = A[k, k]
        for i in range(k + 1, n):
            f = A[i, k] / akk
            for j in range(k + 1, n):
                A[i, j] -= f * A[k, j]
            b[i] -= f * b[k]
    for i in range(n - 1, -1, -1):
        acc = b[i]
        for j in range(i + 1, n):
            acc -= A[i, j] * x[j]
        x[i] = acc / A[i, i]
    return True


@njit(cache=True, nogil=True)
def _inf_norm(v):
    mx = 0.0
    for i in range(v.shape[0]):
        a = abs(v[i])
        if a > mx:
            mx = a
    return mx


@njit(cache=True, nogil=True)
def _tangent(x, s, exps, CA, CB, n_active, mono_ptr, mono_var, mono_exp,
             var_ptr, var_term, var_fac, var_didx, mono, J, A, rhs, out):
    """dx/ds = -J^{-1} H_s at (x, s); returns False on a singular Jacobian."""
    _eval_monos(x, exps, mono_ptr, mono_var, mono_exp, mono)
    _eval_J(CA, CB, s, mono, var_ptr, var_term, var_fac, var_didx, J)
    _eval_Hs(CB, mono, n_active, rhs)
    n = x.shape[0]
    for i in range(n):
        rhs[i] = -rhs[i]
        for j in range(n):
            A[i, j] = J[i, j]
    return _lu_solve(A, rhs, out)


@njit(cache=True, nogil=True)
def _newton(x, s, exps, CA, CB, n_active, mono_ptr, mono_var, mono_exp,
            var_ptr, var_term, var_fac, var_didx, mono, J, A, rhs, dx,
            tol, max_iters, blowup, max_deg):
    """Newton-correct x at fixed s; returns (converged, residual)."""
    n = x.shape[0]
    resid = 1e300
    for _ in range(max_iters):
        _eval_monos(x, exps, mono_ptr, mono_var, mono_exp, mono)
        _eval_H(CA, CB, s, mono, n_active, rhs)
        resid = _inf_norm(rhs)
        xn = _inf_norm(x)
        scale = max(1.0, xn) ** max_deg
        if resid <= tol * scale:
            return True, resid
        _eval_J(CA, CB, s, mono, var_ptr, var_term, var_fac, var_didx, J)
        for i in range(n):
            rhs[i] = -rhs[i]
            for j in range(n):
                A[i, j] = J[i, j]
        if not _lu_solve(A, rhs, dx):
            return False, resid
        for i in range(n):
            x[i] += dx[i]
        if _inf_norm(x) > blowup:
            return False, resid
    _eval_monos(x, exps, mono_ptr, mono_var, mono_exp, mono)
    _eval_H(CA, CB, s, mono, n_active, rhs)
    resid = _inf_norm(rhs)
    return resid <= tol * max(1.0, _inf_norm(x)) ** max_deg, resid


@njit(cache=True, nogil=True)
def _track_one(x, exps, CA, CB, n_active, mono_ptr, mono_var, mono_exp,
               var_ptr, var_term, var_fac, var_didx,
               h0, hmin, hmax, newton_tol, newton_iters, max_steps, blowup,
               accept_tol, endgame_iters, trust_tol, max_deg):
    n = x.shape[0]
    T = exps.shape[0]
    mono = np.empty(T, np.complex128)
    J = np.empty((n, n), np.complex128)
    A = np.empty((n, n), np.complex128)
    rhs = np.empty(n, np.complex128)
    dx = np.empty(n, np.complex128)
    k1 = np.empty(n, np.complex128)
    k2 = np.empty(n, np.complex128)
    k3 = np.empty(n, np.complex128)
    k4 = np.empty(n, np.complex128)
    xs = np.empty(n, np.complex128)
    xtrial = np.empty(n, np.complex128)

    s = 0.0
    h = h0
    streak = 0
    steps = 0
    while steps < max_steps:
        if s >= 1.0:
            break
        if _inf_norm(x) > blowup:
            return STATUS_DIVERGED, 0.0, steps
        if h < hmin:
            break
        hstep = h if h < 1.0 - s else 1.0 - s
        ok = True
        grow_ok = False
        # RK4 predictor on the Davidenko ODE
        if not _tangent(x, s, exps, CA, CB, n_active, mono_ptr, mono_var, mono_exp,
                        var_ptr, var_term, var_fac, var_didx, mono, J, A, rhs, k1):
            ok = False
        if ok:
            for i in range(n):
                xs[i] = x[i] + 0.5 * hstep * k1[i]
            if not _tangent(xs, s + 0.5 * hstep, exps, CA, CB, n_active, mono_ptr,
                            mono_var, mono_exp, var_ptr, var_term, var_fac, var_didx,
                            mono, J, A, rhs, k2):
                ok = False
        if ok:
            for i in range(n):
                xs[i] = x[i] + 0.5 * hstep * k2[i]
            if not _tangent(xs, s + 0.5 * hstep, exps, CA, CB, n_active, mono_ptr,
                            mono_var, mono_exp, var_ptr, var_term, var_fac, var_didx,
                            mono, J, A, rhs, k3):
                ok = False
        if ok:
            for i in range(n):
                xs[i] = x[i] + hstep * k3[i]
            if not _tangent(xs, s + hstep, exps, CA, CB, n_active, mono_ptr,
                            mono_var, mono_exp, var_ptr, var_term, var_fac, var_didx,
                            mono, J, A, rhs, k4):
                ok = False
        if ok:
            for i in range(n):
                xtrial[i] = x[i] + hstep / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
                xs[i] = xtrial[i]
            converged, _ = _newton(xtrial, s + hstep, exps, CA, CB, n_active,
                                   mono_ptr, mono_var, mono_exp, var_ptr, var_term,
                                   var_fac, var_didx, mono, J, A, rhs, dx,
                                   newton_tol, newton_iters, blowup, max_deg)
            ok = converged
            if ok:
                # correction size is the local error estimate: bounding it
                # (relative to both the step and the point's size) rejects
                # jumps onto neighboring paths
                dcorr = 0.0
                dpred = 0.0
                for i in range(n):
                    a = abs(xtrial[i] - xs[i])
                    if a > dcorr:
                        dcorr = a
                    a = abs(xs[i] - x[i])
                    if a > dpred:
                        dpred = a
                budget = trust_tol * (1.0 + _inf_norm(xtrial))
                cap = 0.3 * dpred
                if budget < cap:
                    cap = budget
                slack = 1e-12 * (1.0 + _inf_norm(xtrial))
                if dcorr > cap + slack:
                    ok = False
                elif dcorr <= 0.1 * budget:
                    grow_ok = True
        steps += 1
        if ok:
            for i in range(n):
                x[i] = xtrial[i]
            s += hstep
            streak += 1
            if streak >= 4 and grow_ok and h < hmax:
                h = min(2.0 * h, hmax)
                streak = 0
        else:
            streak = 0
            h *= 0.5
    # endgame: polish at s = 1; a large polish displacement means a
    # wandering (diverging) path got captured by some finite basin
    prenorm = _inf_norm(x)
    if prenorm > blowup:
        return STATUS_DIVERGED, 0.0, steps
    arrived = s >= 1.0
    near = s > 0.99
    if not (arrived or (near and prenorm <= 1e4)):
        if prenorm > 1e3:
            return STATUS_DIVERGED, 0.0, steps
        return STATUS_FAILED, 0.0, steps
    for i in range(n):
        xs[i] = x[i]
    converged, resid = _newton(x, 1.0, exps, CA, CB, n_active, mono_ptr, mono_var,
                               mono_exp, var_ptr, var_term, var_fac, var_didx,
                               mono, J, A, rhs, dx, accept_tol, endgame_iters,
                               blowup, 0)
    disp = 0.0
    for i in range(n):
        a = abs(x[i] - xs[i])
        if a > disp:
            disp = a
    xn = _inf_norm(x)
    if xn > blowup:
        return STATUS_DIVERGED, resid, steps
    if arrived and converged and resid <= accept_tol and disp <= 1e-2 * (1.0 + prenorm):
        return STATUS_OK, resid, steps
    if xn <= 1e4 and resid <= 1e-5 and disp <= 0.1 * (1.0 + prenorm):
        return STATUS_SUSPECT, resid, steps
    if xn > 1e3 or prenorm > 1e3:
        return STATUS_DIVERGED, resid, steps
    return STATUS_FAILED, resid, steps


@njit(cache=True, nogil=True)
def _track_block_jit(starts, exps, CA, CB, n_active, mono_ptr, mono_var, mono_exp,
                     var_ptr, var_term, var_fac, var_didx,
                     h0, hmin, hmax, newton_tol, newton_iters, max_steps, blowup,
                     accept_tol, endgame_iters, trust_tol, max_deg):
    P, n = starts.shape
    endpoints = np.empty((P, n), np.complex128)
    status = np.empty(P, np.int64)
    resid = np.empty(P, np.float64)
    steps = np.empty(P, np.int64)
    x = np.empty(n, np.complex128)
    for p in range(P):
        for i in range(n):
            x[i] = starts[p, i]
        st, rs, ns = _track_one(x, exps, CA, CB, n_active, mono_ptr, mono_var,
                                mono_exp, var_ptr, var_term, var_fac, var_didx,
                                h0, hmin, hmax, newton_tol, newton_iters,
                                max_steps, blowup, accept_tol, endgame_iters,
                                trust_tol, max_deg)
        for i in range(n):
            endpoints[p, i] = x[i]
        status[p] = st
        resid[p] = rs
        steps[p] = ns
    return endpoints, status, resid, steps


def track_block(structure, CA, CB, starts, params):
    max_deg = int(structure.exps[: structure.n_active].sum(axis=1).max())
    (h0, hmin, hmax, newton_tol, newton_iters, max_steps, blowup, accept_tol,
     endgame_iters, trust_tol) = params.as_tuple()
    return _track_block_jit(
        np.ascontiguousarray(starts, dtype=np.complex128),
        structure.exps,
        np.ascontiguousarray(CA, dtype=np.complex128),
        np.ascontiguousarray(CB, dtype=np.complex128),
        structure.n_active,
        structure.mono_ptr, structure.mono_var, structure.mono_exp,
        structure.var_ptr, structure.var_term, structure.var_fac,
        structure.var_didx,
        h0, hmin, hmax, newton_tol, newton_iters, max_steps, blowup,
        accept_tol, endgame_iters, trust_tol, max_deg,
    )
