"""Brute-force reference implementations, deliberately independent of aivar internals."""

import csv
from fractions import Fraction


def pairwise_class_size(rows, cols, r):
    """Count rows agreeing with row r on every column in cols, by direct comparison."""
    n = 0
    for other in rows:
        if all(other[c] == rows[r][c] for c in cols):
            n += 1
    return n


def nearest_rank(values, q):
    """Smallest sample x such that at least q*n samples are <= x."""
    xs = sorted(values)
    n = len(xs)
    need = Fraction(str(q)) * n
    for x in xs:
        if sum(1 for y in xs if y <= x) >= need:
            return x
    return xs[-1]


def truncated_var(values, low, high, conf):
    lo, hi = nearest_rank(values, low), nearest_rank(values, high)
    kept = [x for x in values if lo <= x <= hi]
    return nearest_rank(kept, conf)


def tail_mean(values, conf):
    var = nearest_rank(values, conf)
    tail = [x for x in values if x > var]
    return sum(tail) / len(tail) if tail else var


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))
