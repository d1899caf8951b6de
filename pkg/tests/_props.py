"""Type-diagram property checks over random rational pairs.

Each check returns the list of counterexamples, so callers can both assert
and report.
"""

from fractions import Fraction

import numpy as np

from bergman_lab.classifier import ExponentPair, classify
from bergman_lab.kernel_integrals import Params

PARAM_POOL = [Params(d, a) for d, a in [
    (1, "1/2"), (1, "1"), (1, "3/2"), (1, "2"), (1, "5/2"), (2, "2"), (2, "3"), (2, "7/2"),
    (3, "1"), (3, "9/2"), (1, "-1"), (2, "4"),
]]


def random_fraction(rng, interior=False, max_den=48):
    den = int(rng.integers(1, max_den + 1))
    lo, hi = (1, den - 1) if interior else (0, den)
    if lo > hi:
        return Fraction(1, 2)
    return Fraction(int(rng.integers(lo, hi + 1)), den)


def random_pair(rng, interior=False):
    return ExponentPair(random_fraction(rng, interior), random_fraction(rng, interior))


def symmetry_failures(rng, n):
    bad = []
    for _ in range(n):
        p = PARAM_POOL[rng.integers(len(PARAM_POOL))]
        e = random_pair(rng, interior=True)
        if classify(p, e).bounded != classify(p, e.conjugate()).bounded:
            bad.append((p, e))
    return bad


def convexity_failures(rng, n):
    bad = []
    for _ in range(n):
        p = PARAM_POOL[rng.integers(len(PARAM_POOL))]
        e1, e2 = random_pair(rng), random_pair(rng)
        if not (classify(p, e1).bounded and classify(p, e2).bounded):
            continue
        t = random_fraction(rng)
        mid = ExponentPair(t * e1.inv_p + (1 - t) * e2.inv_p, t * e1.inv_q + (1 - t) * e2.inv_q)
        if not classify(p, mid).bounded:
            bad.append((p, e1, e2, t))
    return bad


def structural_failures(rng, n):
    """Corner law, monotone embedding and compact => bounded."""
    corner = ExponentPair(Fraction(0), Fraction(1))
    bad = []
    for _ in range(n):
        p = PARAM_POOL[rng.integers(len(PARAM_POOL))]
        e = random_pair(rng)
        v = classify(p, e)
        if v.compact and not v.bounded:
            bad.append(("compact-not-bounded", p, e))
        if v.bounded and not classify(p, corner).bounded:
            bad.append(("corner", p, e))
        if v.bounded:
            # shrink 1/p, grow 1/q
            weaker = ExponentPair(e.inv_p * random_fraction(rng),
                                  e.inv_q + (1 - e.inv_q) * random_fraction(rng))
            if not classify(p, weaker).bounded:
                bad.append(("embedding", p, e, weaker))
        if p.D < p.alpha < p.D + 1 and v.bounded != v.compact:
            bad.append(("bounded-iff-compact", p, e))
        if p.alpha == p.D and v.compact != (v.bounded and e.inv_q > e.inv_p):
            bad.append(("compact-iff-q<p", p, e))
    return bad


def rng_for(seed):
    return np.random.default_rng(seed)
