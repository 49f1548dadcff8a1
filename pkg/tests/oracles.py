"""Independent reference computations used by the tests.

These follow the indicator definitions with plain loops and exact
fractions, sharing no code with the library.
"""
from fractions import Fraction


def naive_indicators(citations):
    n = 0
    total = 0
    for c in citations:
        n += 1
        total += c
    square_sum = 0
    for c in citations:
        square_sum += c * c
    exergy = Fraction(total * total, n)
    return {
        "N": n,
        "C": total,
        "i": Fraction(total, n),
        "X": exergy,
        "E": Fraction(square_sum),
        "S": square_sum - exergy,
        "eta": exergy / square_sum,
    }


def naive_pearson(xs, ys):
    xs = [Fraction(x) for x in xs]
    ys = [Fraction(y) for y in ys]
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    # sqrt only at the very end
    return float(sxy) / (float(sxx) ** 0.5 * float(syy) ** 0.5)
