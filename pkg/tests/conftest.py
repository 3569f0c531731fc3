import itertools

from zetaspaces.ffield import FiniteField


def brute_force_count(polys, nvars, F, projective=False):
    """Count zeros by evaluating every tuple with the field's own digit arithmetic."""

    def value(f, pt):
        total = 0
        for exps, c in f.terms.items():
            term = F.from_int(c)
            for x, e in zip(pt, exps):
                if e:
                    term = F.mul(term, F.pow(x, e))
            total = F.add(total, term)
        return total

    count = 0
    for pt in itertools.product(range(F.q), repeat=nvars):
        if projective:
            nz = [x for x in pt if x]
            if not nz or nz[0] != 1:
                continue
        if all(value(f, pt) == 0 for f in polys):
            count += 1
    return count


SMALL_ORDERS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


def small_fields():
    return [FiniteField.of_order(q) for q in SMALL_ORDERS]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS.values(), key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
