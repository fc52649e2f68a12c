"""Small shared utilities for the test suite."""
import random
from fractions import Fraction

from nspoly.model import support_of


def random_mixture(rng: random.Random, points, max_terms=4):
    """Convex combination of a random subset of ``points`` with random positive weights."""
    k = rng.randint(1, min(max_terms, len(points)))
    picked = rng.sample(list(points), k)
    raw = [rng.randint(1, 9) for _ in picked]
    total = sum(raw)
    n = len(picked[0])
    return tuple(sum((Fraction(r, total) * p[i] for r, p in zip(raw, picked)), Fraction(0)) for i in range(n)), picked


def leq(a, b):
    if a is None:
        return True
    if b is None:
        return False
    return a & ~b == 0


def geometric_face(x, vertices):
    """Vertices of the smallest face containing ``x``, decided without supports.

    A vertex v lies in that face iff the segment from v through x can be
    extended beyond x while staying nonnegative.
    """
    out = set()
    for i, v in enumerate(vertices):
        ok = True
        limit = None
        for xi, vi in zip(x, v):
            if xi < vi:
                r = Fraction(vi) / (vi - xi)
                limit = r if limit is None else min(limit, r)
        if limit is not None and limit <= 1:
            ok = False
        if ok:
            out.add(i)
    return frozenset(out)


def supp(x):
    return support_of(x)
