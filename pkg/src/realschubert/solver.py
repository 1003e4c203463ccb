"""Homotopy-continuation solving of Wronski fiber systems.

total_degree_solve tracks every root of a uniform-degree start system
{x_i^m = c_i} (gamma trick) to the target; parameter_track reuses a solved
fiber and moves it along a projective segment between two targets.
Endpoints are clustered (cluster size = numerical multiplicity) and
classified as real / conjugate-paired / Hermitian-paired.
"""

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .charts import (
    ChartSpec,
    FiberSystem,
    build_chart,
    build_system,
    chart_point_to_subspace,
    chart_system,
)
from .geometry import Poly, is_hermitian
from .kernels import (
    STATUS_DIVERGED,
    STATUS_FAILED,
    STATUS_OK,
    STATUS_SUSPECT,
    TrackParams,
    backend_name,
    build_structure,
    track_paths,
)

CLUSTER_RADIUS = 1e-6
TAU_REAL = 1e-8
SINGULAR_COND = 1e10
MAX_FAILED_FRACTION = 0.02


class TrackingError(RuntimeError):
    """Path tracking failed beyond the retry budget."""


class ConjugateClosureError(RuntimeError):
    """A nonreal cluster of a real-target fiber has no conjugate partner."""


@lru_cache(maxsize=16)
def _chart_structure(chart: ChartSpec):
    """Shared monomial structure: chart monomials + start-system monomials."""
    sysd = chart_system(chart)
    n = sysd.n_vars
    rows = [tuple(int(e) for e in r) for r in sysd.exps]
    index = {mono: i for i, mono in enumerate(rows)}
    extra = [(0,) * n] + [
        tuple(chart.m if v == i else 0 for v in range(n)) for i in range(n)
    ]
    for mono in extra:
        if mono not in index:
            index[mono] = len(rows)
            rows.append(mono)
    exps = np.array(rows, dtype=np.int64).reshape(len(rows), n)
    structure = build_structure(exps)
    const_idx = index[(0,) * n]
    power_idx = np.array(
        [index[tuple(chart.m if v == i else 0 for v in range(n))] for i in range(n)],
        dtype=np.int64,
    )
    # chart Wronskian coefficients over the extended active basis
    W = np.zeros((sysd.W.shape[0], len(rows)))
    W[:, : sysd.W.shape[1]] = sysd.W
    return structure, W, const_idx, power_idx


def _row_scale(CA, CB):
    scale = np.maximum(
        np.max(np.abs(CA), axis=1), np.max(np.abs(CB), axis=1)
    )
    scale[scale == 0] = 1.0
    return CA / scale[:, None], CB / scale[:, None]


@dataclass(frozen=True)
class Cluster:
    centroid: np.ndarray
    multiplicity: int
    max_residual: float
    max_cond: float
    members: tuple  # path indices

    @property
    def is_singular(self) -> bool:
        return self.multiplicity > 1 or self.max_cond > SINGULAR_COND

    @property
    def imag_magnitude(self) -> float:
        return float(np.max(np.abs(self.centroid.imag)))


@dataclass
class SolutionSet:
    """Tracked fiber of one target: endpoints, clusters, and accounting."""

    chart: ChartSpec
    target: Poly
    seed: int
    backend: str
    gamma: complex
    n_paths: int
    endpoints: np.ndarray  # (K, n) finite endpoints (statuses OK or SUSPECT)
    path_indices: np.ndarray
    residuals: np.ndarray
    conds: np.ndarray
    statuses: np.ndarray
    n_diverged: int
    n_failed: int
    clusters: list = field(default_factory=list)

    @property
    def n_finite(self) -> int:
        return len(self.endpoints)

    @property
    def total_multiplicity(self) -> int:
        return sum(c.multiplicity for c in self.clusters)

    @property
    def is_regular(self) -> bool:
        return (
            self.n_failed == 0
            and all(not c.is_singular for c in self.clusters)
            and not np.any(self.statuses == STATUS_SUSPECT)
        )

    def accounting_ok(self) -> bool:
        """Finite multiplicities plus diverged paths account for every path."""
        return (
            self.total_multiplicity + self.n_diverged + self.n_failed
            == self.n_paths
        )

    def to_json(self) -> str:
        def c2l(arr):
            return [[float(v.real), float(v.imag)] for v in np.asarray(arr).ravel()]

        data = {
            "m": self.chart.m,
            "lam": list(self.chart.lam),
            "mu": list(self.chart.mu),
            "target": c2l(self.target.coeffs),
            "seed": self.seed,
            "backend": self.backend,
            "gamma": [self.gamma.real, self.gamma.imag],
            "n_paths": self.n_paths,
            "n_vars": self.chart.n_vars,
            "endpoints": c2l(self.endpoints),
            "path_indices": [int(i) for i in self.path_indices],
            "residuals": [float(r) for r in self.residuals],
            "conds": [float(c) for c in self.conds],
            "statuses": [int(s) for s in self.statuses],
            "n_diverged": self.n_diverged,
            "n_failed": self.n_failed,
            "clusters": [
                {
                    "centroid": c2l(c.centroid),
                    "multiplicity": c.multiplicity,
                    "max_residual": c.max_residual,
                    "max_cond": c.max_cond,
                    "members": list(c.members),
                }
                for c in self.clusters
            ],
        }
        return json.dumps(data, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SolutionSet":
        data = json.loads(text)

        def l2c(pairs, shape=None):
            arr = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
            return arr.reshape(shape) if shape else arr

        n = data["n_vars"]
        k = len(data["path_indices"])
        chart = build_chart(data["m"], tuple(data["lam"]), tuple(data["mu"]))
        clusters = [
            Cluster(
                centroid=l2c(c["centroid"]),
                multiplicity=c["multiplicity"],
                max_residual=c["max_residual"],
                max_cond=c["max_cond"],
                members=tuple(c["members"]),
            )
            for c in data["clusters"]
        ]
        return cls(
            chart=chart,
            target=Poly(l2c(data["target"])),
            seed=data["seed"],
            backend=data["backend"],
            gamma=complex(*data["gamma"]),
            n_paths=data["n_paths"],
            endpoints=l2c(data["endpoints"], (k, n)) if k else np.zeros((0, n), np.complex128),
            path_indices=np.array(data["path_indices"], dtype=np.int64),
            residuals=np.array(data["residuals"]),
            conds=np.array(data["conds"]),
            statuses=np.array(data["statuses"], dtype=np.int64),
            n_diverged=data["n_diverged"],
            n_failed=data["n_failed"],
            clusters=clusters,
        )


def _cluster_endpoints(endpoints, residuals, conds, indices, radius=CLUSTER_RADIUS):
    k = len(endpoints)
    parent = list(range(k))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(k):
        for j in range(i + 1, k):
            if np.linalg.norm(endpoints[i] - endpoints[j]) < radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    clusters = []
    for members in groups.values():
        pts = endpoints[members]
        clusters.append(
            Cluster(
                centroid=pts.mean(axis=0),
                multiplicity=len(members),
                max_residual=float(np.max(residuals[members])),
                max_cond=float(np.max(conds[members])),
                members=tuple(int(indices[i]) for i in members),
            )
        )
    clusters.sort(key=lambda c: c.members)
    return clusters


def _endpoint_conds(structure, CA, CB, endpoints):
    if len(endpoints) == 0:
        return np.zeros(0)
    from .kernels.numpy_backend import _eval_J, _monos

    mono = _monos(structure, endpoints)
    J = _eval_J(structure, CA, CB, np.ones(len(endpoints)), mono)
    conds = np.empty(len(endpoints))
    for i in range(len(endpoints)):
        s = np.linalg.svd(J[i], compute_uv=False)
        conds[i] = np.inf if s[-1] == 0 else float(s[0] / s[-1])
    return conds


def _finish(chart, target, seed, backend, gamma, n_paths, endpoints, status,
            resid, structure, CA, CB):
    keep = (status == STATUS_OK) | (status == STATUS_SUSPECT)
    kept_idx = np.where(keep)[0]
    finite = np.ascontiguousarray(endpoints[keep])
    conds = _endpoint_conds(structure, CA, CB, finite)
    sol = SolutionSet(
        chart=chart,
        target=target,
        seed=seed,
        backend=backend,
        gamma=gamma,
        n_paths=n_paths,
        endpoints=finite,
        path_indices=kept_idx.astype(np.int64),
        residuals=resid[keep],
        conds=conds,
        statuses=status[keep],
        n_diverged=int(np.sum(status == STATUS_DIVERGED)),
        n_failed=int(np.sum(status == STATUS_FAILED)),
    )
    sol.clusters = _cluster_endpoints(finite, sol.residuals, conds, kept_idx)
    return sol


def _has_regular_duplicates(sol: SolutionSet) -> bool:
    """A multi-member cluster of well-conditioned endpoints is a path-jump
    artifact, not a genuine multiple point."""
    return any(c.multiplicity > 1 and c.max_cond < 1e8 for c in sol.clusters)


def total_degree_solve(system: FiberSystem, seed: int, *, params: TrackParams = None,
                       backend: str = None, threads: int = None,
                       expected_count: int = None, max_attempts: int = 3) -> SolutionSet:
    """Track all m^D total-degree paths to the target fiber.

    Deterministic for a given seed.  When the fiber cardinality is known
    (expected_count), runs that lose or double a path at a near-crossing
    are detected and rerun with a fresh random phase; persistent mismatch
    raises TrackingError.
    """
    chart = system.chart
    params = params or TrackParams()
    backend = backend or backend_name()
    structure, W, const_idx, power_idx = _chart_structure(chart)
    n = chart.n_vars
    m = chart.m
    T = structure.n_active
    F = np.zeros((n, T), dtype=np.complex128)
    for d in range(1, n + 1):
        F[d - 1] = W[d]
        F[d - 1, const_idx] -= system.psi[d]

    sol = None
    for attempt in range(max_attempts):
        rng = np.random.default_rng([101, seed & 0xFFFFFFFF, attempt])
        gamma = np.exp(2j * np.pi * rng.random())
        gconst = np.exp(2j * np.pi * rng.random(n)) * (0.5 + rng.random(n))
        G = np.zeros((n, T), dtype=np.complex128)
        for i in range(n):
            G[i, power_idx[i]] = 1.0
            G[i, const_idx] = -gconst[i]
        CA, CB = _row_scale(gamma * G, F - gamma * G)

        roots = [gconst[i] ** (1.0 / m) * np.exp(2j * np.pi * np.arange(m) / m)
                 for i in range(n)]
        grids = np.meshgrid(*roots, indexing="ij")
        starts = np.stack([g.ravel() for g in grids], axis=1)

        endpoints, status, resid, _ = track_paths(
            structure, CA, CB, starts, params, backend=backend, threads=threads
        )
        sol = _finish(chart, system.target, seed, backend, gamma, len(starts),
                      endpoints, status, resid, structure, CA, CB)
        ok = sol.n_failed <= MAX_FAILED_FRACTION * sol.n_paths
        if ok and expected_count is not None:
            ok = sol.total_multiplicity == expected_count and not _has_regular_duplicates(sol)
        if ok:
            return sol
    raise TrackingError(
        f"total-degree solve unreliable on chart {chart.label()}: "
        f"{sol.n_failed} failed, multiplicity {sol.total_multiplicity}"
        + (f" (expected {expected_count})" if expected_count is not None else "")
    )


def _parameter_matrices(chart, psi0, psi1, gamma):
    structure, W, const_idx, _ = _chart_structure(chart)
    n = chart.n_vars
    T = structure.n_active
    CA = np.zeros((n, T), dtype=np.complex128)
    CB = np.zeros((n, T), dtype=np.complex128)
    for d in range(1, n + 1):
        CA[d - 1] = gamma * W[d]
        CA[d - 1, const_idx] -= gamma * psi0[d]
        CB[d - 1] = (1.0 - gamma) * W[d]
        CB[d - 1, const_idx] -= psi1[d] - gamma * psi0[d]
    return structure, (*_row_scale(CA, CB),)


def parameter_track(sol: SolutionSet, target: Poly, seed: int, *,
                    params: TrackParams = None, backend: str = None,
                    threads: int = None, max_attempts: int = 3) -> SolutionSet:
    """Move a solved regular fiber to a new target along a projective segment.

    Mid-path failures, escapes, and path jumps (regular-looking duplicate
    endpoints) trigger a rerun with a fresh random phase; persistent failure
    raises TrackingError.
    """
    chart = sol.chart
    params = params or TrackParams()
    backend = backend or backend_name()
    system0 = build_system(chart, sol.target)
    system1 = build_system(chart, target)
    starts = sol.endpoints
    if len(starts) == 0:
        raise TrackingError("start fiber has no finite solutions")
    last = None
    for attempt in range(max_attempts):
        rng = np.random.default_rng([202, seed & 0xFFFFFFFF, attempt])
        gamma = np.exp(2j * np.pi * rng.random())
        structure, (CA, CB) = _parameter_matrices(
            chart, system0.psi, system1.psi, gamma
        )
        endpoints, status, resid, _ = track_paths(
            structure, CA, CB, starts, params, backend=backend, threads=threads
        )
        new = _finish(chart, target, seed, backend, gamma, len(starts),
                      endpoints, status, resid, structure, CA, CB)
        last = new
        if (new.n_failed == 0 and new.n_diverged == 0
                and not _has_regular_duplicates(new)):
            return new
    raise TrackingError(
        f"parameter tracking kept failing ({last.n_failed} failed, "
        f"{last.n_diverged} diverged of {last.n_paths}) on chart {chart.label()}"
    )


@dataclass(frozen=True)
class RealClassification:
    real_count: int
    hermitian_count: int
    n_real_clusters: int
    pairs: tuple  # ((cluster_i, cluster_j), ...) conjugate pairings

    def describe(self) -> str:
        return (
            f"{self.real_count} real (with multiplicity), "
            f"{len(self.pairs)} conjugate pairs, {self.hermitian_count} Hermitian-fixed"
        )


def classify_real(sol: SolutionSet, tau_real: float = TAU_REAL) -> RealClassification:
    """Split clusters into real ones and conjugate pairs; count Hermitian-fixed.

    Raises ConjugateClosureError when a nonreal cluster has no conjugate
    partner of equal multiplicity (the target is then not real, or the
    tracking lost a path).
    """
    if np.max(np.abs(np.asarray(sol.target.coeffs).imag)) > tau_real:
        raise ValueError("real classification needs a real target")
    clusters = sol.clusters
    real = [c for c in clusters if c.imag_magnitude < tau_real]
    nonreal = [c for c in clusters if c.imag_magnitude >= tau_real]
    pair_tol = max(10 * CLUSTER_RADIUS, 100 * tau_real)
    used = set()
    pairs = []
    for i, c in enumerate(nonreal):
        if i in used:
            continue
        partner = None
        for j in range(i + 1, len(nonreal)):
            if j in used:
                continue
            if np.linalg.norm(np.conj(c.centroid) - nonreal[j].centroid) < pair_tol:
                partner = j
                break
        if partner is None or nonreal[partner].multiplicity != c.multiplicity:
            raise ConjugateClosureError(
                f"nonreal cluster at {c.centroid[:2]}... has no conjugate partner"
            )
        used.update((i, partner))
        pairs.append((clusters.index(c), clusters.index(nonreal[partner])))
    hermitian = 0
    for c in clusters:
        h = chart_point_to_subspace(sol.chart, c.centroid)
        if is_hermitian(h, tol=1e-6):
            hermitian += c.multiplicity
    return RealClassification(
        real_count=sum(c.multiplicity for c in real),
        hermitian_count=hermitian,
        n_real_clusters=len(real),
        pairs=tuple(pairs),
    )
