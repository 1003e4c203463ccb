"""Numerical linear algebra on Gr(m, C^{2m}): polynomials, Wronskians,
the symplectic form, osculating flags, and the Lagrangian involution.

Vectors of V = C^{2m} are written in the basis e_0..e_{2m-1}; functionals
in V* are read as polynomials via u -> sum u_k t^k / k!, so polynomial
coefficient vectors and V*-coordinate vectors differ by factorial weights.
Subspaces are row spaces of full-rank matrices; equality of subspaces is
tested through principal angles.
"""

import math
from dataclasses import dataclass

import numpy as np

RANK_TOL = 1e-9
ANGLE_TOL = 1e-8
ROOT_MATCH_TOL = 1e-6


class Poly:
    """Univariate polynomial with complex coefficients in the monomial basis."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128))
        nz = np.nonzero(c)[0]
        self.coeffs = c[: nz[-1] + 1] if nz.size else np.zeros(1, dtype=np.complex128)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return -1 if self.is_zero else len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def __call__(self, t):
        result = 0j
        for c in self.coeffs[::-1]:
            result = result * t + c
        return result

    def deriv(self) -> "Poly":
        if len(self.coeffs) == 1:
            return Poly([0])
        k = np.arange(1, len(self.coeffs))
        return Poly(self.coeffs[1:] * k)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        out = np.zeros(n, dtype=np.complex128)
        out[: len(a)] += a
        out[: len(b)] += b
        return Poly(out)

    def __sub__(self, other):
        return self + Poly(-other.coeffs)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return Poly(np.convolve(self.coeffs, other.coeffs))
        return Poly(self.coeffs * other)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Poly) and len(self.coeffs) == len(other.coeffs) and bool(
            np.all(self.coeffs == other.coeffs)
        )

    def monic(self) -> "Poly":
        if self.is_zero:
            raise ValueError("cannot normalize the zero polynomial")
        return Poly(self.coeffs / self.coeffs[-1])

    def roots(self):
        if self.degree < 1:
            return np.array([], dtype=np.complex128)
        return np.roots(self.coeffs[::-1])

    def shift(self, c) -> "Poly":
        """The polynomial t -> p(t + c)."""
        n = len(self.coeffs)
        out = np.zeros(n, dtype=np.complex128)
        for k, a in enumerate(self.coeffs):
            for j in range(k + 1):
                out[j] += a * math.comb(k, j) * c ** (k - j)
        return Poly(out)

    @classmethod
    def from_roots(cls, roots) -> "Poly":
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @classmethod
    def from_string(cls, text: str) -> "Poly":
        """Parse terms like "1+2t^3", "t+t^2", "(2+1i)*t^2-t".

        Terms are c, c*t^k, t^k, or t, joined by + or -; complex constants
        are written a+bi.
        """
        text = text.replace(" ", "").replace("**", "^")
        if not text:
            raise ValueError("empty polynomial")
        terms = []
        cur = ""
        depth = 0
        for i, ch in enumerate(text):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if ch in "+-" and i > 0 and depth == 0 and text[i - 1] not in "+-(":
                terms.append(cur)
                cur = ch
            else:
                cur += ch
        terms.append(cur)
        coeffs = {}
        for term in terms:
            coeff, power = _parse_term(term)
            coeffs[power] = coeffs.get(power, 0) + coeff
        n = max(coeffs) + 1
        out = np.zeros(n, dtype=np.complex128)
        for k, c in coeffs.items():
            out[k] = c
        return cls(out)

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if c.imag == 0:
                c_text = _fmt_float(c.real)
            else:
                c_text = f"({_fmt_float(c.real)}+{_fmt_float(c.imag)}i)"
            if k == 0:
                parts.append(c_text)
            else:
                t_text = "t" if k == 1 else f"t^{k}"
                parts.append(t_text if c_text == "1" else f"{c_text}*{t_text}")
        return "+".join(parts).replace("+-", "-")

    def __repr__(self):
        return f"Poly({self})"


def _fmt_float(x):
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def _parse_term(term: str):
    sign = 1
    while term and term[0] in "+-":
        if term[0] == "-":
            sign = -sign
        term = term[1:]
    if "t" not in term:
        return sign * _parse_complex(term), 0
    coeff_text, _, rest = term.partition("t")
    coeff_text = coeff_text.rstrip("*")
    coeff = sign * (_parse_complex(coeff_text) if coeff_text else 1.0)
    power = int(rest[1:]) if rest.startswith("^") else 1
    return coeff, power


def _parse_complex(text: str):
    text = text.strip("()")
    if not text:
        return 1.0
    if text.endswith("i") or text.endswith("j"):
        return complex(text.replace("i", "j"))
    return complex(float(text))


@dataclass
class SymplecticForm:
    """A symplectic form <p, q> = p J q on C^{2m} (J antisymmetric, invertible)."""

    J: np.ndarray

    @classmethod
    def standard(cls, m: int) -> "SymplecticForm":
        """The antidiagonal alternating form J = sum (-1)^i e_i* (x) e_{2m-1-i}*."""
        n = 2 * m
        J = np.zeros((n, n))
        for i in range(n):
            J[i, n - 1 - i] = (-1) ** i
        return cls(J)

    @classmethod
    def block(cls, m: int) -> "SymplecticForm":
        """The block form <f_i, f_j> = delta_{i+m,j} (i < m), -delta_{i,j+m} (i >= m)."""
        n = 2 * m
        J = np.zeros((n, n))
        for i in range(m):
            J[i, i + m] = 1.0
            J[i + m, i] = -1.0
        return cls(J)

    def pairing(self, p, q):
        return np.asarray(p) @ self.J @ np.asarray(q)


def standard_to_block_basis(m: int) -> np.ndarray:
    """Change of basis C with C^T J_std C = J_block.

    Columns are the block-basis vectors f_j expressed in the e-basis.
    """
    n = 2 * m
    C = np.zeros((n, n))
    for j in range(m):
        C[j, j] = 1.0
        C[n - 1 - j, m + j] = (-1.0) ** j
    return C


class SubspaceBasis:
    """An m-dimensional subspace of C^{2m}, stored as the row space of an
    m x 2m full-rank matrix."""

    __slots__ = ("m", "mat")

    def __init__(self, mat):
        mat = np.atleast_2d(np.asarray(mat, dtype=np.complex128))
        rows, cols = mat.shape
        if cols != 2 * rows:
            raise ValueError(f"expected an m x 2m matrix, got {rows}x{cols}")
        smin = np.linalg.svd(mat, compute_uv=False)[-1]
        if smin <= RANK_TOL * max(1.0, np.linalg.norm(mat)):
            raise ValueError("matrix is numerically rank-deficient")
        self.m = rows
        self.mat = mat

    def orthonormal(self) -> np.ndarray:
        q, _ = np.linalg.qr(self.mat.conj().T)
        return q.conj().T

    def conjugate(self) -> "SubspaceBasis":
        return SubspaceBasis(self.mat.conj())


def subspace_angle(a: SubspaceBasis, b: SubspaceBasis) -> float:
    """Largest principal angle between two subspaces (radians).

    Sine-based: the residual of projecting one orthonormal basis onto the
    other stays accurate for tiny angles, where arccos of a cosine loses
    half the digits.
    """
    qa, qb = a.orthonormal().T, b.orthonormal().T  # columns orthonormal
    resid = qb - qa @ (qa.conj().T @ qb)
    s = np.linalg.svd(resid, compute_uv=False)
    return float(np.arcsin(np.clip(s[0], 0.0, 1.0)))


def subspaces_equal(a: SubspaceBasis, b: SubspaceBasis, tol: float = ANGLE_TOL) -> bool:
    return subspace_angle(a, b) < tol


def _null_rows(mat: np.ndarray) -> np.ndarray:
    """Rows spanning the right null space {v : mat v = 0}."""
    rows, cols = mat.shape
    _, s, vh = np.linalg.svd(mat)
    rank = int(np.sum(s > RANK_TOL * max(1.0, s[0] if s.size else 1.0)))
    if rank < rows:
        raise ValueError("matrix is numerically rank-deficient")
    return vh[rank:].conj()


def annihilator(h: SubspaceBasis, form: SymplecticForm = None) -> SubspaceBasis:
    """H^angle = {v : <u, v> = 0 for all u in H}; an involution on Gr(m, 2m)."""
    if form is None:
        form = SymplecticForm.standard(h.m)
    return SubspaceBasis(_null_rows(h.mat @ form.J))


def is_lagrangian(h: SubspaceBasis, form: SymplecticForm = None, tol: float = RANK_TOL) -> bool:
    """True iff the form vanishes on H, i.e. H^angle = H."""
    if form is None:
        form = SymplecticForm.standard(h.m)
    gram = h.mat @ form.J @ h.mat.T
    return bool(np.linalg.norm(gram) < tol * max(1.0, np.linalg.norm(h.mat) ** 2))


def is_hermitian(h: SubspaceBasis, form: SymplecticForm = None, tol: float = ANGLE_TOL) -> bool:
    """True iff conj(H) = H^angle (fixed point of the composed involution)."""
    return subspaces_equal(h.conjugate(), annihilator(h, form), tol=tol)


def eta_matrix(m: int) -> np.ndarray:
    """The nilpotent shift eta e_i = e_{i+1}; generates the osculating family."""
    n = 2 * m
    eta = np.zeros((n, n))
    for i in range(n - 1):
        eta[i + 1, i] = 1.0
    return eta


def osculating_matrix(m: int, j: int, t) -> np.ndarray:
    """Row span of F_j(t) = e^{eta t} span{e_0..e_{j-1}} as a j x 2m matrix.

    Row i has entries t^{k-i} / (k-i)! at position k >= i; at t = infinity
    the span is {e_{2m-j}..e_{2m-1}}.
    """
    if not 1 <= j <= 2 * m:
        raise ValueError(f"need 1 <= j <= 2m, got j={j}")
    n = 2 * m
    mat = np.zeros((j, n), dtype=np.complex128)
    if t is None or t == np.inf:
        for i in range(j):
            mat[i, n - j + i] = 1.0
    else:
        for i in range(j):
            for k in range(i, n):
                mat[i, k] = t ** (k - i) / math.factorial(k - i)
    return mat


def osculating_subspace(m: int, t) -> SubspaceBasis:
    """The Lagrangian member F_m(t) of the osculating flag, as a subspace."""
    return SubspaceBasis(osculating_matrix(m, m, t))


def dual_basis_polys(h: SubspaceBasis):
    """A basis of the annihilator of H in V*, read as m polynomials.

    The functional u = sum u_k e_k* corresponds to the polynomial
    sum u_k t^k / k!.
    """
    rows = _null_rows(h.mat)
    k = np.arange(2 * h.m)
    weights = np.array([1.0 / math.factorial(int(i)) for i in k])
    return [Poly(row * weights) for row in rows]


def subspace_from_dual_polys(polys) -> SubspaceBasis:
    """Inverse of dual_basis_polys: the subspace annihilated by the given span."""
    m = len(polys)
    n = 2 * m
    u = np.zeros((m, n), dtype=np.complex128)
    for i, p in enumerate(polys):
        c = p.coeffs
        if len(c) > n:
            raise ValueError(f"degree {len(c)-1} too large for C_{n-1}[t]")
        u[i, : len(c)] = c * np.array([math.factorial(k) for k in range(len(c))])
    return SubspaceBasis(_null_rows(u))


def wronskian(polys) -> Poly:
    """Wronskian determinant of m polynomials of degree <= 2m-1.

    Expanded over column sets: Wr = sum_A vandermonde(A) det(coeff[:, A]) t^{sum A - C(m,2)}.
    Returns the zero polynomial for linearly dependent input.
    """
    m = len(polys)
    n = 2 * m
    mat = np.zeros((m, n), dtype=np.complex128)
    for i, p in enumerate(polys):
        c = p.coeffs
        if len(c) > n:
            raise ValueError(f"degree {len(c)-1} too large for C_{n-1}[t]")
        mat[i, : len(c)] = c
    out = np.zeros(m * m + 1, dtype=np.complex128)
    offset = m * (m - 1) // 2
    for subset, vdm in _column_sets(m, n):
        minor = np.linalg.det(mat[:, subset])
        if minor != 0:
            out[sum(subset) - offset] += vdm * minor
    return Poly(out)


def _column_sets(m, n):
    from itertools import combinations

    for subset in combinations(range(n), m):
        vdm = 1
        for a in range(m):
            for b in range(a + 1, m):
                vdm *= subset[b] - subset[a]
        yield subset, vdm


def wronski_of_subspace(h: SubspaceBasis) -> Poly:
    """The monic Wronskian of a dual basis of H; well defined on Gr(m, 2m)."""
    return wronskian(dual_basis_polys(h)).monic()


def meets_nontrivially(h: SubspaceBasis, s) -> float:
    """|det [H; F_m(s)]|; zero exactly when H meets the osculating plane F_m(s)."""
    f = osculating_matrix(h.m, h.m, s)
    stacked = np.vstack([h.mat, f])
    return abs(np.linalg.det(stacked))


def symplectic_pairing(u: Poly, v: Poly, r: int):
    """The alternating (r odd) form sum (-1)^i u_i v_{r-i} in divided-power
    coordinates u_i = i! * (coefficient of t^i)."""
    if u.degree > r or v.degree > r:
        raise ValueError(f"polynomials must have degree <= {r}")
    uc = np.zeros(r + 1, dtype=np.complex128)
    vc = np.zeros(r + 1, dtype=np.complex128)
    uc[: len(u.coeffs)] = u.coeffs
    vc[: len(v.coeffs)] = v.coeffs
    total = 0j
    for i in range(r + 1):
        total += (-1) ** i * (math.factorial(i) * uc[i]) * (
            math.factorial(r - i) * vc[r - i]
        )
    return total


def random_subspace(m: int, rng) -> SubspaceBasis:
    """A Gaussian-random point of Gr(m, C^{2m})."""
    mat = rng.standard_normal((m, 2 * m)) + 1j * rng.standard_normal((m, 2 * m))
    return SubspaceBasis(mat)
