import numpy as np
import pytest

from tubecat.category import builtin_category, bundled_names, compute_modular_data
from tubecat.reps import RepFamily
from tubecat.tube import TubeEngine

ALL_CATEGORIES = list(bundled_names())

_cats: dict = {}
_engines: dict = {}
_cores: dict = {}


@pytest.fixture(scope="session")
def category_for():
    def get(name: str):
        if name not in _cats:
            _cats[name] = builtin_category(name)
        return _cats[name]

    return get


@pytest.fixture(scope="session")
def engine_for(category_for):
    """One tube engine per category, shared across the whole run; every
    engine caches its hom spaces and named morphisms internally."""

    def get(name: str) -> TubeEngine:
        if name not in _engines:
            _engines[name] = TubeEngine(category_for(name))
        return _engines[name]

    return get


@pytest.fixture(scope="session")
def core_for(engine_for):
    """One representation family (action tables over the length-<=2 word
    family) per category."""

    def get(name: str) -> RepFamily:
        if name not in _cores:
            _cores[name] = RepFamily(engine_for(name))
        return _cores[name]

    return get


@pytest.fixture(scope="session")
def modular_for(category_for):
    def get(name: str):
        return compute_modular_data(category_for(name))

    return get


def random_endomorphism(eng: TubeEngine, X, rng: np.random.Generator):
    """Random complex combination of the endomorphism basis of a word."""
    hb = eng.hom_basis(X, X)
    vec = rng.standard_normal(hb.total_dim) + 1j * rng.standard_normal(hb.total_dim)
    mor = eng.zero_morphism(X, X)
    for coeff, elem in zip(vec, hb.all_elements()):
        mor = mor + complex(coeff) * eng.basis_morphism(elem, X, X)
    return mor
