import numpy as np
import pytest

import oracles
from bolloops.constructions import BOL_NAMES, standard_loops
from bolloops.loop import Loop


@pytest.fixture(scope="session")
def catalog():
    return standard_loops()


@pytest.fixture(scope="session")
def bol_loops(catalog):
    return {name: catalog[name] for name in BOL_NAMES}


@pytest.fixture(scope="session")
def small_tables():
    """Every loop table of order 1..6 with identity 0 (9471 tables)."""
    return {n: oracles.reduced_latin_squares(n) for n in range(1, 7)}


@pytest.fixture(scope="session")
def small_right_bol(small_tables):
    return {n: [t for t in ts if oracles.is_right_bol(t)] for n, ts in small_tables.items()}


@pytest.fixture(scope="session")
def trivial_center_results():
    """Both model searches, reduced to isomorphism classes (several minutes)."""
    from bolloops.classify import up_to_isomorphism
    from bolloops.modelsearch import model_search, trivial_center_spec
    out = {}
    for case in ("ea", "cyc"):
        models = model_search(trivial_center_spec(case))
        reps, _ = up_to_isomorphism(models)
        out[case] = {"models": models, "classes": reps}
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def as_loop(t) -> Loop:
    return Loop(np.asarray(t))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.VERDICTS):
        terminalreporter.write_line(mod.VERDICTS[n])
