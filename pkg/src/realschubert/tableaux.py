"""Standard Young tableaux of skew shapes: enumeration, counting, sign-imbalance.

Counting uses the Aitken determinant formula (exact, arbitrary size);
enumeration and sign computations are depth-first over fillings and are
guarded by a box-count cap since they are exponential.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .partitions import SkewShape

DEFAULT_ENUM_CAP = 16


@dataclass(frozen=True)
class StandardTableau:
    shape: SkewShape
    entries: dict  # (i, j) -> value in 1..n

    def __str__(self):
        rows = []
        for i, (lo, hi) in enumerate(self.shape.row_bounds(), start=1):
            cells = ["."] * lo + [str(self.entries[(i, j)]) for j in range(lo + 1, hi + 1)]
            rows.append(" ".join(cells))
        return "\n".join(rows)


def _check_cap(shape: SkewShape, cap: int):
    if shape.size > cap:
        raise ValueError(
            f"shape has {shape.size} boxes, above the enumeration cap of {cap};"
            f" use count_syt for counting"
        )


def enumerate_syt(shape: SkewShape, cap: int = DEFAULT_ENUM_CAP):
    """Yield every standard filling of the shape exactly once.

    Entries 1..n increase along rows and down columns.  Fillings are built
    by placing 1, 2, ... into cells whose left and upper neighbors (within
    the shape) are already filled.
    """
    _check_cap(shape, cap)
    cells = shape.cells()
    n = len(cells)
    if n == 0:
        yield StandardTableau(shape, {})
        return
    cellset = set(cells)
    entries = {}

    def placeable(c):
        i, j = c
        left = (i, j - 1)
        up = (i - 1, j)
        return (left not in cellset or left in entries) and (
            up not in cellset or up in entries
        )

    def fill(k):
        if k > n:
            yield StandardTableau(shape, dict(entries))
            return
        for c in cells:
            if c not in entries and placeable(c):
                entries[c] = k
                yield from fill(k + 1)
                del entries[c]

    yield from fill(1)


def count_syt(shape: SkewShape) -> int:
    """Number of standard Young tableaux, via n! det[ 1/((outer_i - inner_j - i + j)!) ]."""
    outer = shape.outer
    n = shape.size
    if not outer:
        return 1
    r = len(outer)
    inner = shape.inner + (0,) * (r - len(shape.inner))
    mat = [
        [
            Fraction(1, factorial(outer[i] - inner[j] - i + j))
            if outer[i] - inner[j] - i + j >= 0
            else Fraction(0)
            for j in range(r)
        ]
        for i in range(r)
    ]
    det = _det_fraction(mat)
    result = det * factorial(n)
    assert result.denominator == 1
    return int(result)


def _det_fraction(mat):
    """Determinant over Fraction by fraction-free-ish Gaussian elimination."""
    m = [row[:] for row in mat]
    r = len(m)
    det = Fraction(1)
    for col in range(r):
        pivot = next((i for i in range(col, r) if m[i][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for i in range(col + 1, r):
            if m[i][col] != 0:
                factor = m[i][col] * inv
                for j in range(col, r):
                    m[i][j] -= factor * m[col][j]
    return det


def transpose_tableau(t: StandardTableau) -> StandardTableau:
    """Reflect entries across the main diagonal; an involution on fillings.

    Requires the transposed shape to be representable, i.e. outer and inner
    both symmetric.
    """
    shape = t.shape
    flipped = SkewShape(
        _transpose_tuple(shape.outer), _transpose_tuple(shape.inner), shape.p, shape.m
    )
    return StandardTableau(flipped, {(j, i): v for (i, j), v in t.entries.items()})


def _transpose_tuple(lam):
    from .partitions import transpose

    return transpose(lam)


def tableau_sign(t: StandardTableau) -> int:
    """Sign of the permutation sending row-reading order to entry order."""
    word = [t.entries[c] for c in t.shape.cells()]
    inversions = sum(
        1 for a in range(len(word)) for b in range(a + 1, len(word)) if word[a] > word[b]
    )
    return -1 if inversions % 2 else 1


def sign_imbalance(shape: SkewShape, cap: int = DEFAULT_ENUM_CAP) -> int:
    """|sum of tableau signs| relative to the row-reading reference extension.

    The absolute value makes the choice of reference linear extension
    immaterial (changing it multiplies every sign by a fixed sign).
    """
    _check_cap(shape, cap)
    return abs(sum(tableau_sign(t) for t in enumerate_syt(shape, cap=cap)))
