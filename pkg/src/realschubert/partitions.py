"""Partitions, Young diagrams, and skew shapes.

Partitions are plain tuples of weakly decreasing positive integers; the
empty tuple is the empty partition.  Trailing zeros are never stored, so
tuple equality is structural equality and partitions can key dicts.
Cell coordinates are 1-based (row i, column j).
"""

from dataclasses import dataclass

Partition = tuple


def partition(parts) -> Partition:
    """Canonicalize an iterable of parts into a partition tuple.

    Drops trailing zeros and validates that parts weakly decrease.
    """
    p = tuple(int(x) for x in parts)
    while p and p[-1] == 0:
        p = p[:-1]
    if any(x <= 0 for x in p):
        raise ValueError(f"parts must be positive: {p}")
    if any(p[i] < p[i + 1] for i in range(len(p) - 1)):
        raise ValueError(f"parts must weakly decrease: {p}")
    return p


def parse_partition(text: str) -> Partition:
    """Parse the dotted text form, e.g. "3.1.1"; "0" or "" is the empty partition."""
    text = text.strip()
    if text in ("", "0"):
        return ()
    return partition(int(s) for s in text.split("."))


def format_partition(lam: Partition) -> str:
    return ".".join(str(x) for x in lam) if lam else "0"


def weight(lam: Partition) -> int:
    """|lam|, the number of boxes."""
    return sum(lam)


def transpose(lam: Partition) -> Partition:
    """Column lengths of the diagram; an involution."""
    if not lam:
        return ()
    cols = [0] * lam[0]
    for part in lam:
        for j in range(part):
            cols[j] += 1
    return tuple(cols)


def is_symmetric(lam: Partition) -> bool:
    return transpose(lam) == lam


def ell(lam: Partition) -> int:
    """Number of boxes on the main diagonal: max{i : i <= lam_i}, 0 for the empty partition."""
    k = 0
    for i, part in enumerate(lam, start=1):
        if i <= part:
            k = i
        else:
            break
    return k


def norm(lam: Partition) -> int:
    """(|lam| + ell(lam)) / 2, the Lagrangian codimension of a symmetric partition."""
    w, k = weight(lam), ell(lam)
    if (w + k) % 2:
        raise ValueError(f"|lam| + ell(lam) is odd, so {lam} is not symmetric")
    return (w + k) // 2


def to_strict(lam: Partition) -> tuple:
    """Strict partition (lam_1, lam_2 - 1, ...) keeping positive entries.

    Defined for symmetric lam; has ell(lam) parts summing to norm(lam).
    """
    if not is_symmetric(lam):
        raise ValueError(f"{lam} is not symmetric")
    out = tuple(part - i for i, part in enumerate(lam) if part - i > 0)
    return out


def contains(outer: Partition, inner: Partition) -> bool:
    """Componentwise containment inner <= outer."""
    if len(inner) > len(outer):
        return False
    return all(inner[i] <= outer[i] for i in range(len(inner)))


def fits_box(lam: Partition, m: int, p: int) -> bool:
    return len(lam) <= m and (not lam or lam[0] <= p)


def complement(lam: Partition, m: int, p: int) -> Partition:
    """Complement lam^c in the m x p box: lam^c_i = p - lam_{m+1-i}."""
    if not fits_box(lam, m, p):
        raise ValueError(f"{lam} does not fit in a {m}x{p} box")
    padded = lam + (0,) * (m - len(lam))
    return partition(p - padded[m - 1 - i] for i in range(m))


@dataclass(frozen=True)
class SkewShape:
    """Boxes of `outer` not in `inner`, inside an m x p bounding box."""

    outer: Partition
    inner: Partition
    m: int
    p: int

    def __post_init__(self):
        if not fits_box(self.outer, self.m, self.p):
            raise ValueError(f"{self.outer} does not fit in a {self.m}x{self.p} box")
        if not contains(self.outer, self.inner):
            raise ValueError(f"inner {self.inner} not contained in outer {self.outer}")

    @property
    def size(self) -> int:
        return weight(self.outer) - weight(self.inner)

    def row_bounds(self):
        """Per row i (1-based): columns run inner_i < j <= outer_i."""
        inner = self.inner + (0,) * (len(self.outer) - len(self.inner))
        return [(inner[i], self.outer[i]) for i in range(len(self.outer))]

    def cells(self):
        """All cells (i, j), 1-based, in row-reading order."""
        out = []
        for i, (lo, hi) in enumerate(self.row_bounds(), start=1):
            out.extend((i, j) for j in range(lo + 1, hi + 1))
        return out

    def is_symmetric_shape(self) -> bool:
        """Whether the cell set is fixed by (i, j) -> (j, i)."""
        cells = set(self.cells())
        return all((j, i) in cells for (i, j) in cells)


def skew(outer: Partition, inner: Partition, m: int, p: int) -> SkewShape:
    return SkewShape(outer, inner, m, p)


def complement_skew(lam: Partition, mu: Partition, m: int) -> SkewShape:
    """The shape lam^c/mu in the m x m box, with |lam^c/mu| = m^2 - |lam| - |mu|."""
    return skew(complement(lam, m, m), mu, m, m)


def boxes_above_diagonal(shape: SkewShape) -> int:
    """Number of cells (i, j) with j > i."""
    return sum(1 for (i, j) in shape.cells() if j > i)


def partitions_in_box(m: int, p: int):
    """All partitions fitting in the m x p box, the empty one first."""
    out = [()]
    stack = [(p, ())]
    while stack:
        cap, prefix = stack.pop()
        if len(prefix) == m:
            continue
        for part in range(1, cap + 1):
            lam = prefix + (part,)
            out.append(lam)
            stack.append((part, lam))
    return out


def symmetric_partitions_in_box(m: int):
    """All symmetric partitions in the m x m box."""
    return [lam for lam in partitions_in_box(m, m) if is_symmetric(lam)]
