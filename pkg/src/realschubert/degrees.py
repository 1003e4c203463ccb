"""Schubert intersection numbers and the paper-level condition checkers.

Intersection numbers d(lambda) are computed by Littlewood-Richardson
multiplication in H*(Gr(m, m+p)): products of Schur classes are expanded by
enumerating horizontal-strip chains subject to the lattice-word condition,
so non-hook conditions are handled directly.  Coefficients are Python ints
(arbitrary precision).
"""

from dataclasses import dataclass
from math import comb, factorial

from .partitions import (
    Partition,
    boxes_above_diagonal,
    complement,
    complement_skew,
    contains,
    ell,
    fits_box,
    format_partition,
    is_symmetric,
    norm,
    parse_partition,
    symmetric_partitions_in_box,
    weight,
)
from .tableaux import count_syt


@dataclass(frozen=True)
class SchubertProblem:
    """Multiset of Schubert conditions {(partition, multiplicity)} on Gr(m, m+p)."""

    m: int
    p: int
    conditions: tuple  # ((Partition, mult), ...)

    def __post_init__(self):
        for lam, mult in self.conditions:
            if mult < 1:
                raise ValueError(f"multiplicity must be >= 1, got {mult}")
            if not fits_box(lam, self.m, self.p):
                raise ValueError(f"{lam} does not fit in the {self.m}x{self.p} box")
        if self.total_weight != self.m * self.p:
            raise ValueError(
                f"condition weights sum to {self.total_weight}, "
                f"need m*p = {self.m * self.p}"
            )

    @property
    def total_weight(self) -> int:
        return sum(weight(lam) * mult for lam, mult in self.conditions)

    def expanded(self):
        """The conditions as a flat list with multiplicity."""
        out = []
        for lam, mult in self.conditions:
            out.extend([lam] * mult)
        return out

    def is_symmetric_problem(self) -> bool:
        return all(is_symmetric(lam) for lam, _ in self.conditions)

    @classmethod
    def from_text(cls, m: int, p: int, text: str) -> "SchubertProblem":
        """Parse e.g. "3.2.1^1 3.1.1^1 1^5" (partition^multiplicity, space-separated)."""
        conds = {}
        for token in text.split():
            if "^" in token:
                part_text, mult_text = token.rsplit("^", 1)
                mult = int(mult_text)
            else:
                part_text, mult = token, 1
            lam = parse_partition(part_text)
            conds[lam] = conds.get(lam, 0) + mult
        ordered = tuple(sorted(conds.items(), key=lambda kv: (-weight(kv[0]), kv[0])))
        return cls(m, p, ordered)

    def __str__(self):
        return " ".join(
            f"{format_partition(lam)}^{mult}" for lam, mult in self.conditions
        )


@dataclass(frozen=True)
class CohomologyClass:
    """A nonnegative-integer combination of Schur classes in H*(Gr(m, m+p))."""

    m: int
    p: int
    terms: dict  # Partition -> positive int

    @classmethod
    def unit(cls, m: int, p: int) -> "CohomologyClass":
        return cls(m, p, {(): 1})

    def coefficient(self, lam: Partition) -> int:
        return self.terms.get(lam, 0)


def _strip_placements(cur, strip_size, prev_cum, m, p):
    """All ways to add a horizontal strip of given size to the shape `cur`.

    `prev_cum[r]` is the cumulative count of the previous entry through row
    r (0-based); the lattice-word condition caps the current entry's count
    through row r at prev_cum[r-1].  Pass None for the first entry.
    Returns (new_shape_tuple, cumulative_counts) pairs.
    """
    out = []
    new = list(cur)
    counts = [0] * m

    def rec(r, remaining):
        if remaining == 0:
            out.append((tuple(new[:r] + list(cur[r:])), _cumulate(counts, m)))
            return
        if r == m:
            return
        hi = p if r == 0 else min(new[r - 1], cur[r - 1])
        hi -= cur[r]
        if prev_cum is not None:
            placed = sum(counts[:r])
            hi = min(hi, (prev_cum[r - 1] if r >= 1 else 0) - placed)
        hi = min(hi, remaining)
        for c in range(hi, -1, -1):
            counts[r] = c
            new[r] = cur[r] + c
            rec(r + 1, remaining - c)
        counts[r] = 0
        new[r] = cur[r]

    rec(0, strip_size)
    return out


def _cumulate(counts, m):
    out = []
    total = 0
    for r in range(m):
        total += counts[r]
        out.append(total)
    return tuple(out)


def _lr_expand(kappa: Partition, lam: Partition, m: int, p: int) -> dict:
    """Schur product s_kappa * s_lam truncated to the m x p box.

    Returns {nu: c^nu_{kappa,lam}} by counting chains of horizontal strips
    (content lam) satisfying the lattice-word condition.
    """
    cur = tuple(kappa) + (0,) * (m - len(kappa))
    states = {(cur, None): 1}
    for entry_size in lam:
        nxt = {}
        for (shape, prev_cum), mult in states.items():
            for new_shape, cum in _strip_placements(shape, entry_size, prev_cum, m, p):
                key = (new_shape, cum)
                nxt[key] = nxt.get(key, 0) + mult
        states = nxt
    result = {}
    for (shape, _), mult in states.items():
        nu = tuple(x for x in shape if x)
        result[nu] = result.get(nu, 0) + mult
    return result


def lr_multiply(c: CohomologyClass, lam: Partition) -> CohomologyClass:
    """Multiply a cohomology class by the Schur class of lam."""
    if not fits_box(lam, c.m, c.p):
        raise ValueError(f"{lam} does not fit in the {c.m}x{c.p} box")
    result = {}
    for kappa, coef in c.terms.items():
        for nu, cnt in _lr_expand(kappa, lam, c.m, c.p).items():
            result[nu] = result.get(nu, 0) + coef * cnt
    return CohomologyClass(c.m, c.p, result)


def problem_degree(problem: SchubertProblem) -> int:
    """Number of complex solutions d(lambda): the full-box coefficient of the product.

    Conditions are multiplied in decreasing-weight order to keep
    intermediate support small; the result is order-independent.
    """
    c = CohomologyClass.unit(problem.m, problem.p)
    for lam in sorted(problem.expanded(), key=weight, reverse=True):
        c = lr_multiply(c, lam)
    return c.coefficient((problem.p,) * problem.m)


def degree_formula_G(m: int, p: int) -> int:
    """Degree of the Wronski map on Gr(m, m+p) (closed formula)."""
    num = factorial(m * p)
    for i in range(1, p):
        num *= factorial(i)
    den = 1
    for i in range(p):
        den *= factorial(m + i)
    q, r = divmod(num, den)
    assert r == 0
    return q


def degree_formula_LG(m: int) -> int:
    """Number of Lagrangian subspaces meeting C(m+1,2) osculating planes."""
    num = factorial(comb(m + 1, 2))
    for i in range(1, m):
        num *= factorial(i)
    den = 1
    for i in range(1, m + 1):
        den *= factorial(2 * i - 1)
    q, r = divmod(num * 2 ** comb(m, 2), den)
    assert r == 0
    return q


def index_set(lam: Partition, m: int) -> frozenset:
    """a(lam) = {m+i-lam_i : i = 1..m}, an m-subset of [2m]."""
    if not fits_box(lam, m, m):
        raise ValueError(f"{lam} does not fit in the {m}x{m} box")
    padded = lam + (0,) * (m - len(lam))
    return frozenset(m + i - padded[i - 1] for i in range(1, m + 1))


def index_involution(alpha: frozenset, m: int) -> frozenset:
    """alpha -> {2m+1-i : i not in alpha}; satisfies a(lam)^inv = a(transpose(lam))."""
    return frozenset(2 * m + 1 - i for i in range(1, 2 * m + 1) if i not in alpha)


@dataclass(frozen=True)
class TheoremCheck:
    """Outcome of the two-anchor sufficient condition for the mod-4 congruence."""

    holds: bool
    hypothesis_holds: bool
    lhs_twice: int  # 2 * (2 + (sum|nu| + m - ell(lam) - ell(mu)) / 2), kept integral
    rhs: int  # n, the number of remaining conditions

    @property
    def inequality_holds(self) -> bool:
        return self.lhs_twice <= 2 * self.rhs

    def describe(self) -> str:
        lhs = self.lhs_twice / 2
        lhs_text = f"{int(lhs)}" if self.lhs_twice % 2 == 0 else f"{lhs}"
        cmp = "<=" if self.inequality_holds else ">"
        hyp = "holds" if self.hypothesis_holds else "fails"
        return f"hypothesis {hyp}; 2 + (sum|nu| + m - l - l')/2 = {lhs_text} {cmp} n = {self.rhs}"


def check_theorem_condition(m, lam, mu, nus) -> TheoremCheck:
    """Sufficient condition for the mod-4 congruence, given designated anchors.

    True iff the anchors satisfy the hypothesis (lam != mu, or lam = mu
    appearing again among the nus, or lam = mu = empty which imposes no
    anchoring at all) and 2 + (sum|nu| + m - ell(lam) - ell(mu))/2 <= n.
    """
    for part in [lam, mu, *nus]:
        if not is_symmetric(part):
            raise ValueError(f"{part} is not symmetric")
    hypothesis = lam != mu or lam == () or any(nu == lam for nu in nus)
    n = len(nus)
    lhs_twice = 4 + sum(weight(nu) for nu in nus) + m - ell(lam) - ell(mu)
    return TheoremCheck(
        holds=hypothesis and lhs_twice <= 2 * n,
        hypothesis_holds=hypothesis,
        lhs_twice=lhs_twice,
        rhs=n,
    )


def check_theorem_any_designation(problem: SchubertProblem):
    """Try every anchor designation; returns (best TheoremCheck, (lam, mu) or None).

    A problem enjoys the congruence if some designation passes, including
    the trivial empty-anchor designation (the full Wronski case).
    """
    if problem.m != problem.p:
        raise ValueError("symmetric Schubert problems live on Gr(m, 2m)")
    conds = problem.expanded()
    best = check_theorem_condition(problem.m, (), (), conds)
    best_pair = ((), ())
    if best.holds:
        return best, best_pair
    seen = set()
    for i in range(len(conds)):
        for j in range(i + 1, len(conds)):
            pair = tuple(sorted([conds[i], conds[j]], reverse=True))
            if pair in seen:
                continue
            seen.add(pair)
            rest = conds[:i] + conds[i + 1 : j] + conds[j + 1 :]
            check = check_theorem_condition(problem.m, pair[0], pair[1], rest)
            if check.holds:
                return check, pair
            best, best_pair = check, pair
    return best, None


def check_conjecture_condition(problem: SchubertProblem):
    """Conjectural codimension condition: margin = sum||lam|| - C(m+1,2) >= 2.

    Returns (holds, margin).
    """
    if problem.m != problem.p:
        raise ValueError("symmetric Schubert problems live on Gr(m, 2m)")
    if not problem.is_symmetric_problem():
        raise ValueError("all conditions must be symmetric partitions")
    margin = sum(norm(lam) * mult for lam, mult in problem.conditions) - comb(
        problem.m + 1, 2
    )
    return margin >= 2, margin


def check_compare_implication(m, lam, mu, nus) -> bool:
    """The two-anchor condition implies the codimension condition (always True)."""
    theorem = check_theorem_condition(m, lam, mu, nus)
    conds = {}
    for part in [lam, mu, *nus]:
        conds[part] = conds.get(part, 0) + 1
    conds.pop((), None)
    problem = SchubertProblem(m, m, tuple(sorted(conds.items(), reverse=True)))
    conjecture, _ = check_conjecture_condition(problem)
    return (not theorem.holds) or conjecture


def enumerate_degzero(m: int):
    """Unordered pairs (lam, mu) of symmetric partitions whose restricted
    Wronski map has topological degree zero but fibers with real points.

    Conditions: mu inside lam^c; 4 + m <= |lam^c/mu| + ell(lam) + ell(mu);
    an odd number of skew boxes above the diagonal; and the tableau count
    f(lam^c/mu) congruent to 2 mod 4.

    Pairs are deduplicated at the level of the Schubert problem
    {(lam,1), (mu,1), (box, |lam^c/mu|)}: a single-box component is
    absorbed into the box conditions, so the canonical representative never
    uses (1,).  Pairs with a part equal to m are dropped as reducible (every
    solution contains a fixed vector, so the problem is one on a smaller
    Grassmannian and is counted there).  This is the convention that
    reproduces the counts 1, 2, 7, 18, 34 for m = 3..7.
    """
    if m < 3:
        raise ValueError("requires m >= 3")
    sym = [
        lam
        for lam in symmetric_partitions_in_box(m)
        if lam != (1,) and not (lam and lam[0] == m)
    ]
    out = []
    seen = set()
    for lam in sym:
        lam_c = complement(lam, m, m)
        for mu in sym:
            key = tuple(sorted([lam, mu], reverse=True))
            if key in seen:
                continue
            if not contains(lam_c, mu):
                continue
            seen.add(key)
            shape = complement_skew(lam, mu, m)
            if 4 + m > shape.size + ell(lam) + ell(mu):
                continue
            if boxes_above_diagonal(shape) % 2 == 0:
                continue
            if count_syt(shape) % 4 != 2:
                continue
            out.append(key)
    out.sort()
    return out


def restricted_degree(lam: Partition, mu: Partition, m: int) -> int:
    """Degree of the restricted Wronski map: f(lam^c/mu), the SYT count."""
    return count_syt(complement_skew(lam, mu, m))
