from fractions import Fraction


def gauss_jordan(rows, rhs):
    """Row-reduce ``rows @ x = rhs`` over the rationals.

    Returns ``(x, rank)`` where ``x`` is one solution (free variables set to
    zero), or ``(None, rank)`` when the system is inconsistent.
    """
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(n_rows):
            if i != r and aug[i][c] != 0:
                factor = aug[i][c]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    for i in range(r, n_rows):
        if aug[i][n_cols] != 0:
            return None, r
    x = [Fraction(0)] * n_cols
    for i, c in enumerate(pivots):
        x[c] = aug[i][n_cols]
    return x, r


def solve_exact(rows, rhs):
    """One rational solution of ``rows @ x = rhs``, or ``None`` if inconsistent."""
    return gauss_jordan(rows, rhs)[0]
