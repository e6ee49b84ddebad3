import random

import pytest

from folcalc._rational import CQ
from folcalc.trig_algebra import TrigPoly


def random_trigpoly(rng: random.Random, dim: int, max_freq: int = 2, terms: int = 3,
                    denom: int = 4) -> TrigPoly:
    """Small random real trig polynomial with rational coefficients."""
    table = {}
    for _ in range(terms):
        k = tuple(rng.randint(-max_freq, max_freq) for _ in range(dim))
        re = rng.randint(-3, 3)
        im = rng.randint(-3, 3) if any(k) else 0
        c = CQ(f"{re}/{denom}", f"{im}/{denom}")
        mk = tuple(-a for a in k)
        table[k] = table.get(k, CQ(0)) + c
        table[mk] = table.get(mk, CQ(0)) + c.conj()
    return TrigPoly(dim, table)


@pytest.fixture
def rng():
    return random.Random(20240817)
