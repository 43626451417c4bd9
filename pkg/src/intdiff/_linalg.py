"""Small exact linear algebra over the rationals (Gauss-Jordan)."""

from fractions import Fraction


def inverse(rows):
    """Return the inverse of a square matrix of rationals, or None if singular."""
    size = len(rows)
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(size)]
            for i, row in enumerate(rows)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if work[r][col] != 0), None)
        if pivot is None:
            return None
        work[col], work[pivot] = work[pivot], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(size):
            if r != col and work[r][col] != 0:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return [row[size:] for row in work]


def determinant(rows) -> Fraction:
    size = len(rows)
    work = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if work[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            det = -det
        det *= work[col][col]
        for r in range(col + 1, size):
            f = work[r][col] / work[col][col]
            if f:
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return det
