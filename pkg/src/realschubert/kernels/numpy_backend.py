"""Pure-numpy backend: paths advance in lockstep batches with masking.

Same predictor/corrector and status semantics as the numba backend; used
when numba is unavailable or REAL_SCHUBERT_BACKEND=numpy, and by the
benchmark for comparison.  Paths are processed in bounded chunks to keep
the (batch x monomial) temporaries small.
"""

import numpy as np

from . import STATUS_DIVERGED, STATUS_FAILED, STATUS_OK, STATUS_SUSPECT

CHUNK = 512


def _monos(structure, x):
    B = x.shape[0]
    T, n = structure.exps.shape
    out = np.ones((B, T), dtype=np.complex128)
    for v in range(n):
        col = structure.exps[:, v]
        nz = col > 0
        if np.any(nz):
            out[:, nz] *= x[:, v : v + 1] ** col[nz]
    return out


def _eval_H(structure, CA, CB, s, mono):
    act = mono[:, : structure.n_active]
    return act @ CA.T + s[:, None] * (act @ CB.T)


def _eval_J(structure, CA, CB, s, mono):
    B = mono.shape[0]
    neq, n = CA.shape[0], structure.n_vars
    J = np.empty((B, neq, n), dtype=np.complex128)
    for v in range(n):
        lo, hi = structure.var_ptr[v], structure.var_ptr[v + 1]
        terms = structure.var_term[lo:hi]
        w = structure.var_fac[lo:hi] * mono[:, structure.var_didx[lo:hi]]
        J[:, :, v] = w @ CA[:, terms].T + s[:, None] * (w @ CB[:, terms].T)
    return J


def _solve(J, rhs):
    """Batched solve with per-item fallback; returns (solution, ok_mask)."""
    B, n = rhs.shape
    ok = np.ones(B, dtype=bool)
    try:
        return np.linalg.solve(J, rhs[..., None])[..., 0], ok
    except np.linalg.LinAlgError:
        out = np.zeros_like(rhs)
        for b in range(B):
            try:
                out[b] = np.linalg.solve(J[b], rhs[b])
            except np.linalg.LinAlgError:
                ok[b] = False
        return out, ok


def _tangent(structure, CA, CB, x, s):
    mono = _monos(structure, x)
    J = _eval_J(structure, CA, CB, s, mono)
    hs = mono[:, : structure.n_active] @ CB.T
    return _solve(J, -hs)


def _newton(structure, CA, CB, x, s, tol, iters, blowup, max_deg):
    """Batched Newton at fixed s; returns (x, converged, residual)."""
    B = x.shape[0]
    x = x.copy()
    converged = np.zeros(B, dtype=bool)
    resid = np.full(B, np.inf)
    for _ in range(iters):
        live = ~converged
        if not np.any(live):
            break
        mono = _monos(structure, x[live])
        H = _eval_H(structure, CA, CB, s[live], mono)
        r = np.max(np.abs(H), axis=1)
        resid[live] = r
        xn = np.maximum(1.0, np.max(np.abs(x[live]), axis=1)) ** max_deg
        newly = r <= tol * xn
        idx = np.where(live)[0]
        converged[idx[newly]] = True
        work = idx[~newly]
        if work.size == 0:
            break
        mono_w = mono[~newly]
        J = _eval_J(structure, CA, CB, s[work], mono_w)
        delta, ok = _solve(J, -H[~newly])
        x[work[ok]] += delta[ok]
        big = np.max(np.abs(x[work]), axis=1) > blowup
        if np.any(big | ~ok):
            resid[work[big | ~ok]] = np.inf
    live = ~converged
    if np.any(live):
        mono = _monos(structure, x[live])
        H = _eval_H(structure, CA, CB, s[live], mono)
        r = np.max(np.abs(H), axis=1)
        resid[live] = r
        xn = np.maximum(1.0, np.max(np.abs(x[live]), axis=1)) ** max_deg
        idx = np.where(live)[0]
        converged[idx[r <= tol * xn]] = True
    return x, converged, resid


def track_block(structure, CA, CB, starts, params):
    P = starts.shape[0]
    endpoints = np.empty_like(starts)
    status = np.empty(P, dtype=np.int64)
    resid = np.empty(P, dtype=np.float64)
    steps = np.empty(P, dtype=np.int64)
    for lo in range(0, P, CHUNK):
        hi = min(lo + CHUNK, P)
        e, st, rs, ns = _track_chunk(structure, CA, CB, starts[lo:hi], params)
        endpoints[lo:hi] = e
        status[lo:hi] = st
        resid[lo:hi] = rs
        steps[lo:hi] = ns
    return endpoints, status, resid, steps


def _track_chunk(structure, CA, CB, starts, params):
    (h0, hmin, hmax, newton_tol, newton_iters, max_steps, blowup, accept_tol,
     endgame_iters, trust_tol) = params.as_tuple()
    max_deg = int(structure.exps[: structure.n_active].sum(axis=1).max())
    B, n = starts.shape
    x = starts.astype(np.complex128).copy()
    s = np.zeros(B)
    h = np.full(B, h0)
    streak = np.zeros(B, dtype=np.int64)
    nsteps = np.zeros(B, dtype=np.int64)
    status = np.full(B, -1, dtype=np.int64)  # -1 = still tracking
    resid = np.zeros(B)

    while True:
        active = status == -1
        over = active & (np.max(np.abs(x), axis=1) > blowup)
        status[over] = STATUS_DIVERGED
        active = status == -1
        if not np.any(active):
            break
        stalled = active & (h < hmin)
        arrived = active & (s >= 1.0)
        endgame = arrived | (stalled & (s > 0.99) & (np.max(np.abs(x), axis=1) <= 1e4))
        hopeless = stalled & ~endgame
        if np.any(hopeless):
            xn = np.max(np.abs(x[hopeless]), axis=1)
            status[hopeless] = np.where(xn > 1e3, STATUS_DIVERGED, STATUS_FAILED)
        if np.any(endgame):
            idx = np.where(endgame)[0]
            prenorm = np.max(np.abs(x[idx]), axis=1)
            xe, conv, r = _newton(
                structure, CA, CB, x[idx], np.ones(idx.size), accept_tol,
                endgame_iters, blowup, 0,
            )
            # a large polish displacement means a wandering (diverging) path
            # got captured by some finite basin, not genuine convergence
            disp = np.max(np.abs(xe - x[idx]), axis=1)
            x[idx] = xe
            resid[idx] = r
            xn = np.max(np.abs(xe), axis=1)
            st = np.full(idx.size, STATUS_FAILED, dtype=np.int64)
            st[(xn > 1e3) | (prenorm > 1e3)] = STATUS_DIVERGED
            st[(xn <= 1e4) & (r <= 1e-5) & (disp <= 0.1 * (1.0 + prenorm))] = STATUS_SUSPECT
            st[arrived[idx] & conv & (r <= accept_tol) & (xn <= blowup)
               & (disp <= 1e-2 * (1.0 + prenorm))] = STATUS_OK
            st[xn > blowup] = STATUS_DIVERGED
            status[idx] = st
        active = status == -1
        if not np.any(active):
            break
        idx = np.where(active)[0]
        hstep = np.minimum(h[idx], 1.0 - s[idx])
        xa, sa = x[idx], s[idx]
        ok = np.ones(idx.size, dtype=bool)

        k1, ok1 = _tangent(structure, CA, CB, xa, sa)
        ok &= ok1
        k2, ok2 = _tangent(structure, CA, CB, xa + 0.5 * hstep[:, None] * k1, sa + 0.5 * hstep)
        ok &= ok2
        k3, ok3 = _tangent(structure, CA, CB, xa + 0.5 * hstep[:, None] * k2, sa + 0.5 * hstep)
        ok &= ok3
        k4, ok4 = _tangent(structure, CA, CB, xa + hstep[:, None] * k3, sa + hstep)
        ok &= ok4
        xp = xa + hstep[:, None] / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        xc, conv, _ = _newton(
            structure, CA, CB, xp, sa + hstep, newton_tol, newton_iters, blowup,
            max_deg,
        )
        # correction size is the local error estimate: bounding it (relative
        # to both the step and the point's size) rejects jumps onto
        # neighboring paths
        dcorr = np.max(np.abs(xc - xp), axis=1)
        dpred = np.max(np.abs(xp - xa), axis=1)
        xnorm = 1.0 + np.max(np.abs(xc), axis=1)
        budget = trust_tol * xnorm
        cap = np.minimum(0.3 * dpred, budget)
        trusted = dcorr <= cap + 1e-12 * xnorm
        success = ok & conv & trusted & (np.max(np.abs(xc), axis=1) <= blowup)
        grow_ok = dcorr <= 0.1 * budget

        good = idx[success]
        x[good] = xc[success]
        s[good] += hstep[success]
        streak[good] += 1
        bump = (streak[good] >= 4) & grow_ok[success]
        h[good[bump]] = np.minimum(2.0 * h[good[bump]], hmax)
        streak[good[bump]] = 0

        bad = idx[~success]
        streak[bad] = 0
        h[bad] *= 0.5

        nsteps[idx] += 1
        exhausted = (status == -1) & (nsteps >= max_steps)
        if np.any(exhausted):
            xn = np.max(np.abs(x[exhausted]), axis=1)
            status[exhausted] = np.where(xn > 1e3, STATUS_DIVERGED, STATUS_FAILED)
    return x, status, resid, nsteps
