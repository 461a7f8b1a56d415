import random

import pytest

from logrank.core import MultiPoly


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_poly(rng, nvars: int, degree: int, terms: int = 4, coef: int = 5) -> MultiPoly:
    """Random polynomial of total degree exactly ``degree`` (for degree >= 0)."""
    out = {}
    while True:
        for _ in range(terms):
            d = rng.randint(0, degree)
            mono = [0] * nvars
            for _ in range(d):
                mono[rng.randrange(nvars)] += 1
            out[tuple(mono)] = rng.choice([c for c in range(-coef, coef + 1) if c])
        top = [0] * nvars
        for _ in range(degree):
            top[rng.randrange(nvars)] += 1
        out[tuple(top)] = rng.choice([c for c in range(-coef, coef + 1) if c])
        p = MultiPoly(nvars, out)
        if p.degree() == degree:
            return p
        out = {}
