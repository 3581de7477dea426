"""Shared builders for the test suite."""

import math

from mixed_milnor import FamilySpec, build_family
from mixed_milnor.core import MixedMonomial, MixedPolynomial


def poly(n, terms):
    """Build a MixedPolynomial from (coefficient, nu, mu) triples."""
    return MixedPolynomial(n, tuple(MixedMonomial(c, nu, mu) for c, nu, mu in terms))


def brieskorn(a, b=None):
    b = b or (0,) * len(a)
    return build_family(FamilySpec("brieskorn", tuple(a), tuple(b)))


def random_mixed(rng, n, monomial_count, max_exp=4):
    """Random dense-ish mixed polynomial with distinct exponent pairs."""
    terms = []
    seen = set()
    while len(terms) < monomial_count:
        nu = tuple(int(rng.integers(0, max_exp + 1)) for _ in range(n))
        mu = tuple(int(rng.integers(0, max_exp + 1)) for _ in range(n))
        if (nu, mu) in seen or sum(nu) + sum(mu) == 0:
            continue
        seen.add((nu, mu))
        c = complex(rng.normal(), rng.normal())
        if abs(c) < 0.1:
            c = c + 0.5
        terms.append((c, nu, mu))
    return poly(n, terms)


def lcm_of(values):
    return math.lcm(*values)
