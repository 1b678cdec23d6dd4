import numpy as np
import pytest

from riesz_lab.group_lattice import (
    GroupSpec,
    LatticeFunction,
    mean_zero_project,
    random_real_function,
)


@pytest.fixture
def z4():
    return GroupSpec((4,), ())


@pytest.fixture
def z4sq():
    return GroupSpec((4, 4), ())


def rand_mz(spec: GroupSpec, seed: int) -> LatticeFunction:
    """Random real mean-zero spatial function; the stock test input."""
    return mean_zero_project(random_real_function(spec, seed))


def cosine_mode(spec: GroupSpec, idx) -> LatticeFunction:
    """Real character combination e_idx + e_{-idx} as a spatial function."""
    from riesz_lab.group_lattice import character

    c = character(spec, idx)
    vals = 2.0 * c.values.real
    return LatticeFunction(spec, vals.astype(np.complex128), "spatial")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion."""
    import re

    try:
        from test_acceptance import CRITERIA
    except ImportError:
        return
    results = {}
    for status, label in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", nodeid)
            if m:
                results[int(m.group(1))] = label
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        label = results.get(n, "SKIP")
        terminalreporter.write_line(f"{label} criterion {n}: {CRITERIA[n]}")
