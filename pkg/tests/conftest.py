from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings

from nilcohom.corpus import CORPUS, load_entry_object
from nilcohom.exactfield import GaussianRational
from nilcohom.exterior import Form
from nilcohom.structure import StructureEquations, family_base, make_structure, validate

settings.register_profile("exact", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("exact")


def corpus_structures() -> list[StructureEquations]:
    """Every plain corpus structure plus the base fibre of every family."""
    out = []
    for entry in CORPUS:
        obj = load_entry_object(entry)
        out.append(obj if isinstance(obj, StructureEquations) else family_base(obj))
    return out


def _small(rng: random.Random) -> GaussianRational:
    return GaussianRational(rng.randint(-2, 2), rng.randint(-2, 2))


def random_nilpotent(rng: random.Random, attempts: int = 200) -> StructureEquations:
    """n=3, d eta^1 = 0, d eta^2 in span eta^{1 1bar}, d eta^3 built from eta^1, eta^2; d^2 = 0 enforced."""
    for _ in range(attempts):
        d2 = Form.monomial(3, (1,), (1,), _small(rng))
        d3 = Form.zero(3)
        for holo, anti in (((1, 2), ()), ((1,), (1,)), ((1,), (2,)), ((2,), (1,)), ((2,), (2,))):
            if rng.random() < 0.7:
                d3 = d3 + Form.monomial(3, holo, anti, _small(rng))
        s = make_structure(3, [Form.zero(3), d2, d3], name="random")
        if validate(s).ok:
            return s
    raise RuntimeError("no valid structure drawn")


def random_structures(count: int, seed: int = 20240611) -> list[StructureEquations]:
    rng = random.Random(seed)
    return [random_nilpotent(rng) for _ in range(count)]


@pytest.fixture(scope="session")
def corpus_list() -> list[StructureEquations]:
    return corpus_structures()
