"""Path-tracking kernels: numba-compiled per-path loops with a pure-numpy
batched fallback.

The backend is chosen by the REAL_SCHUBERT_BACKEND environment variable
("numba" or "numpy"); default is numba when importable.  Both backends
track the same homotopy H(x, s) = (CA + s*CB) @ monomials(x) from s=0 to
s=1 with an RK4 predictor and Newton corrector, and agree on the status
encoding:

    0 converged finite endpoint
    1 diverged (solution at infinity)
    2 path failure (step size collapsed away from a finite endpoint)
    3 reached s=1 near a finite point but would not polish (suspect
      singular endpoint)
"""

import os
from dataclasses import dataclass

import numpy as np

STATUS_OK = 0
STATUS_DIVERGED = 1
STATUS_FAILED = 2
STATUS_SUSPECT = 3


@dataclass(frozen=True)
class TrackParams:
    h0: float = 0.05
    hmin: float = 1e-7
    hmax: float = 0.1
    newton_tol: float = 1e-12
    newton_iters: int = 4
    max_steps: int = 6000
    blowup: float = 1e6
    accept_tol: float = 1e-10
    endgame_iters: int = 30
    trust_tol: float = 1e-3  # corrector-size budget relative to 1 + |x|

    def as_tuple(self):
        return (
            self.h0,
            self.hmin,
            self.hmax,
            self.newton_tol,
            self.newton_iters,
            self.max_steps,
            self.blowup,
            self.accept_tol,
            self.endgame_iters,
            self.trust_tol,
        )


@dataclass(frozen=True)
class HomotopyStructure:
    """Monomial bookkeeping shared by every homotopy on one chart.

    exps holds the active monomials first (columns of the coefficient
    matrices), then monomials that only occur as derivatives.  The CSR
    triples drive monomial evaluation and Jacobian assembly.
    """

    exps: np.ndarray  # (T, n) int64
    n_active: int
    mono_ptr: np.ndarray
    mono_var: np.ndarray
    mono_exp: np.ndarray
    var_ptr: np.ndarray
    var_term: np.ndarray
    var_fac: np.ndarray
    var_didx: np.ndarray

    @property
    def n_vars(self):
        return self.exps.shape[1]


def build_structure(active_exps: np.ndarray) -> HomotopyStructure:
    """Extend a monomial basis with first derivatives and build CSR tables."""
    active = [tuple(int(e) for e in row) for row in active_exps]
    index = {mono: i for i, mono in enumerate(active)}
    assert len(index) == len(active), "duplicate monomials in basis"
    n = active_exps.shape[1]
    all_monos = list(active)
    for mono in active:
        for v in range(n):
            if mono[v] > 0:
                reduced = mono[:v] + (mono[v] - 1,) + mono[v + 1 :]
                if reduced not in index:
                    index[reduced] = len(all_monos)
                    all_monos.append(reduced)
    exps = np.array(all_monos, dtype=np.int64).reshape(len(all_monos), n)

    mono_ptr = [0]
    mono_var = []
    mono_exp = []
    for mono in all_monos:
        for v in range(n):
            if mono[v] > 0:
                mono_var.append(v)
                mono_exp.append(mono[v])
        mono_ptr.append(len(mono_var))

    var_ptr = [0]
    var_term = []
    var_fac = []
    var_didx = []
    for v in range(n):
        for t, mono in enumerate(active):
            if mono[v] > 0:
                reduced = mono[:v] + (mono[v] - 1,) + mono[v + 1 :]
                var_term.append(t)
                var_fac.append(float(mono[v]))
                var_didx.append(index[reduced])
        var_ptr.append(len(var_term))

    return HomotopyStructure(
        exps=exps,
        n_active=len(active),
        mono_ptr=np.array(mono_ptr, dtype=np.int64),
        mono_var=np.array(mono_var, dtype=np.int64),
        mono_exp=np.array(mono_exp, dtype=np.int64),
        var_ptr=np.array(var_ptr, dtype=np.int64),
        var_term=np.array(var_term, dtype=np.int64),
        var_fac=np.array(var_fac, dtype=np.float64),
        var_didx=np.array(var_didx, dtype=np.int64),
    )


def backend_name() -> str:
    choice = os.environ.get("REAL_SCHUBERT_BACKEND", "").strip().lower()
    if choice in ("numba", "numpy"):
        return choice
    if choice:
        raise ValueError(f"REAL_SCHUBERT_BACKEND must be 'numba' or 'numpy', got {choice!r}")
    try:
        import numba  # noqa: F401

        return "numba"
    except ImportError:
        return "numpy"


def track_paths(structure, CA, CB, starts, params: TrackParams, backend: str = None, threads: int = None):
    """Track every start point to s=1.

    Returns (endpoints, status, residuals, steps); rows follow the order of
    `starts`, so parallel and serial runs serialize identically.
    """
    name = backend or backend_name()
    if name == "numba":
        from . import numba_backend as impl
    else:
        from . import numpy_backend as impl
    if threads is None:
        threads = int(os.environ.get("REAL_SCHUBERT_THREADS", "1"))
    n_paths = starts.shape[0]
    if threads <= 1 or n_paths < 64:
        return impl.track_block(structure, CA, CB, starts, params)

    from concurrent.futures import ThreadPoolExecutor

    bounds = np.linspace(0, n_paths, threads + 1).astype(int)
    chunks = [(bounds[i], bounds[i + 1]) for i in range(threads) if bounds[i] < bounds[i + 1]]
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        futures = [
            pool.submit(impl.track_block, structure, CA, CB, starts[lo:hi], params)
            for lo, hi in chunks
        ]
        parts = [f.result() for f in futures]
    endpoints = np.concatenate([p[0] for p in parts])
    status = np.concatenate([p[1] for p in parts])
    resid = np.concatenate([p[2] for p in parts])
    steps = np.concatenate([p[3] for p in parts])
    return endpoints, status, resid, steps
