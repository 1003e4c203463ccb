"""Coordinate charts on restricted Wronski domains and their fiber systems.

A chart parametrizes the subspaces H in X_lam F(inf) cap X_mu F(0) through
a pivot/free monomial structure on a basis of the dual space H-perp read as
polynomials: mu pins the valuations at t = 0 (pivot exponents
a_j = j-1 + mu_{m+1-j}) and lam caps the degrees (b_j = m-1+j - lam_j).
For lam = 0 the rows instead run to t^{2m-1} in reduced echelon form, which
is the usual big cell when mu = 0 too.  Either way the number of free
coordinates must come out to |lam^c/mu|, and the Wronskian of the rows is
t^{|mu|} times a polynomial of that degree whose trailing coefficient is a
nonzero constant, so a fiber of the Wronski map over a target Phi becomes
the square system  w_d(x) = Phi_d * w_0 / Phi_0  (d = 1..|lam^c/mu|).
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .partitions import (
    complement,
    contains,
    format_partition,
    is_symmetric,
    weight,
)


class ChartError(ValueError):
    """Chart bookkeeping failed validation (containment or dimension)."""


class DegenerateTargetError(ValueError):
    """Target polynomial has the wrong degree or a vanishing trailing coefficient."""


@dataclass(frozen=True)
class ChartSpec:
    """Pivot/free exponent bookkeeping for one restricted-Wronski chart."""

    m: int
    lam: tuple
    mu: tuple
    pivots: tuple  # m pivot exponents, strictly increasing
    frees: tuple  # per row, the tuple of free exponents

    @property
    def n_vars(self) -> int:
        return sum(len(f) for f in self.frees)

    @property
    def target_degree(self) -> int:
        """|lam^c/mu|, the degree of the normalized Wronskian."""
        return self.m * self.m - weight(self.lam) - weight(self.mu)

    @property
    def mu_weight(self) -> int:
        return weight(self.mu)

    def var_positions(self):
        """Flat variable index -> (row, exponent)."""
        out = []
        for j, row in enumerate(self.frees):
            out.extend((j, k) for k in row)
        return out

    def coefficient_rows(self, x):
        """The m x 2m polynomial-coefficient matrix of the dual basis at x."""
        mat = np.zeros((self.m, 2 * self.m), dtype=np.complex128)
        for j, a in enumerate(self.pivots):
            mat[j, a] = 1.0
        for idx, (j, k) in enumerate(self.var_positions()):
            mat[j, k] = x[idx]
        return mat

    def label(self) -> str:
        return f"m{self.m}:{format_partition(self.lam)}:{format_partition(self.mu)}"


def build_chart(m: int, lam: tuple, mu: tuple) -> ChartSpec:
    """Chart for the intersection of the lam condition at infinity with the
    mu condition at 0; validates the free-coordinate count |lam^c/mu|."""
    if not is_symmetric(lam) or not is_symmetric(mu):
        raise ChartError(f"conditions must be symmetric partitions: {lam}, {mu}")
    if not contains(complement(lam, m, m), mu):
        raise ChartError(f"{mu} is not contained in the complement of {lam}")
    lam_p = lam + (0,) * (m - len(lam))
    mu_p = mu + (0,) * (m - len(mu))
    pivots = tuple(j + mu_p[m - 1 - j] for j in range(m))
    if lam:
        caps = tuple(m + j - lam_p[j] for j in range(m))
        frees = tuple(
            tuple(range(pivots[j] + 1, caps[j] + 1)) for j in range(m)
        )
    else:
        pivot_set = set(pivots)
        frees = tuple(
            tuple(k for k in range(pivots[j] + 1, 2 * m) if k not in pivot_set)
            for j in range(m)
        )
    chart = ChartSpec(m, lam, mu, pivots, frees)
    expected = chart.target_degree
    if chart.n_vars != expected:
        raise ChartError(
            f"chart has {chart.n_vars} free coordinates, expected {expected}"
        )
    if any(pivots[j] >= pivots[j + 1] for j in range(m - 1)):
        raise ChartError(f"pivot exponents not strictly increasing: {pivots}")
    return chart


@dataclass(frozen=True)
class ChartSystem:
    """Symbolic Wronskian coefficients of a chart, over a shared monomial basis.

    w_d(x) = W[d] @ monomials(x) is the coefficient of t^(d + |mu|) in the
    Wronskian of the chart rows; W[0] is the constant w_0.
    """

    chart: ChartSpec
    exps: np.ndarray  # (T, n) int64, exponent vectors
    W: np.ndarray  # (D+1, T) float64
    w0: float

    @property
    def n_vars(self):
        return self.exps.shape[1]


def _symbolic_minor(rows, cols, n_vars):
    """Determinant of a symbolic matrix as {exponent_tuple: float}.

    Each rows[j] maps column -> entry, where an entry is either a float or
    a variable index marker ('x', idx).
    """
    n_rows = len(rows)
    result = {}

    def expand(j, used, coeff, mono):
        if coeff == 0:
            return
        if j == n_rows:
            key = tuple(mono)
            result[key] = result.get(key, 0.0) + coeff
            return
        for ci, c in enumerate(cols):
            if used & (1 << ci):
                continue
            entry = rows[j].get(c)
            if entry is None:
                continue
            sign = -1.0 if (bin(used >> (ci + 1)).count("1")) % 2 else 1.0
            if isinstance(entry, tuple):
                mono[entry[1]] += 1
                expand(j + 1, used | (1 << ci), coeff * sign, mono)
                mono[entry[1]] -= 1
            else:
                expand(j + 1, used | (1 << ci), coeff * sign * entry, mono)

    expand(0, 0, 1.0, [0] * n_vars)
    return result


@lru_cache(maxsize=32)
def chart_system(chart: ChartSpec) -> ChartSystem:
    """Expand the chart's Wronskian coefficients symbolically.

    Wr(rows) = sum over column sets A of vandermonde(A) * minor_A(x)
    * t^(sum A - C(m,2)); grouping by sum A gives the w_d.
    """
    m = chart.m
    n = chart.n_vars
    var_index = {pos: i for i, pos in enumerate(chart.var_positions())}
    rows = []
    for j, a in enumerate(chart.pivots):
        row = {a: 1.0}
        for k in chart.frees[j]:
            row[k] = ("x", var_index[(j, k)])
        rows.append(row)
    offset = m * (m - 1) // 2 + chart.mu_weight
    degree = chart.target_degree

    poly_by_degree = [dict() for _ in range(degree + 1)]
    all_cols = sorted({k for r in rows for k in r})
    for cols in combinations(all_cols, m):
        d = sum(cols) - offset
        if d < 0 or d > degree:
            continue
        vdm = 1.0
        for a_i, b_i in combinations(cols, 2):
            vdm *= b_i - a_i
        minor = _symbolic_minor(rows, cols, n)
        bucket = poly_by_degree[d]
        for mono, c in minor.items():
            if c != 0:
                bucket[mono] = bucket.get(mono, 0.0) + vdm * c
    monos = sorted({mono for bucket in poly_by_degree for mono in bucket})
    mono_index = {mono: i for i, mono in enumerate(monos)}
    exps = np.array(monos, dtype=np.int64).reshape(len(monos), n)
    W = np.zeros((degree + 1, len(monos)))
    for d, bucket in enumerate(poly_by_degree):
        for mono, c in bucket.items():
            W[d, mono_index[mono]] = c
    const_idx = mono_index.get((0,) * n)
    w0_row = W[0]
    if const_idx is None or np.count_nonzero(w0_row) != 1 or w0_row[const_idx] == 0:
        raise ChartError("trailing Wronskian coefficient is not a nonzero constant")
    return ChartSystem(chart, exps, W, float(w0_row[const_idx]))


@dataclass(frozen=True)
class FiberSystem:
    """Square coefficient-matching system for the fiber over one target."""

    chart: ChartSpec
    target: object  # Poly of degree target_degree with nonzero trailing coeff
    system: ChartSystem
    psi: np.ndarray  # (D+1,) complex, normalized target coefficients

    @property
    def n_equations(self):
        return self.chart.target_degree

    @property
    def bezout(self) -> int:
        """Paths tracked by a uniform total-degree start system."""
        return self.chart.m ** self.n_equations

    def wronskian_coefficients(self, x):
        """The w_d(x) vector (degree-indexed, including the constant w_0)."""
        mono = _eval_monomials(self.system.exps, np.asarray(x, dtype=np.complex128))
        return self.system.W @ mono

    def residual(self, x) -> float:
        w = self.wronskian_coefficients(x)
        scale = np.maximum(1.0, np.abs(self.psi[1:]))
        return float(np.max(np.abs(w[1:] - self.psi[1:]) / scale))


def _eval_monomials(exps, x):
    out = np.ones(exps.shape[0], dtype=np.complex128)
    for v in range(exps.shape[1]):
        e = exps[:, v]
        nz = e > 0
        if np.any(nz):
            out[nz] *= x[v] ** e[nz]
    return out


def build_system(chart: ChartSpec, target) -> FiberSystem:
    """Fiber system for the normalized target Phi (degree |lam^c/mu|).

    Raises DegenerateTargetError when the degree is wrong or the trailing
    coefficient vanishes; the caller reparametrizes or resamples.
    """
    sys_ = chart_system(chart)
    degree = chart.target_degree
    if target.degree != degree:
        raise DegenerateTargetError(
            f"target degree {target.degree}, chart needs {degree}"
        )
    coeffs = np.asarray(target.coeffs, dtype=np.complex128)
    scale = np.max(np.abs(coeffs))
    if abs(coeffs[0]) <= 1e-12 * scale:
        raise DegenerateTargetError("trailing coefficient of the target vanishes")
    psi = coeffs * (sys_.w0 / coeffs[0])
    return FiberSystem(chart, target, sys_, psi)


def chart_point_to_subspace(chart: ChartSpec, x):
    """Lift chart coordinates to the subspace H in Gr(m, C^{2m})."""
    from .geometry import SubspaceBasis, subspace_from_dual_polys, Poly

    rows = chart.coefficient_rows(x)
    return subspace_from_dual_polys([Poly(row) for row in rows])


def chart_wronskian(chart: ChartSpec, x):
    """Normalized Wronskian (divided by t^{|mu|}) of the chart point x."""
    from .geometry import Poly

    sys_ = chart_system(chart)
    w = sys_.W @ _eval_monomials(sys_.exps, np.asarray(x, dtype=np.complex128))
    return Poly(w)
