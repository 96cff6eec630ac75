import numpy as np
import pytest

from quasiherm import builtin_names, dynamics, make_builtin, verify


@pytest.fixture(scope="session")
def growing():
    return make_builtin("growing-metric-2d")


@pytest.fixture(scope="session")
def growing_result(growing):
    return dynamics.evolve(growing)


@pytest.fixture(scope="session")
def growing_rows(growing_result):
    return verify.diagnostics_from_result(growing_result)


@pytest.fixture(scope="session")
def growing_rows_4000():
    s = make_builtin("growing-metric-2d", steps=4000)
    return verify.run_diagnostics(s)


@pytest.fixture(scope="session")
def builtin_rows():
    out = {}
    for name in builtin_names():
        s = make_builtin(name)
        out[name] = (s, verify.run_diagnostics(s))
    return out


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260823)
