from __future__ import annotations

import random
from importlib import resources
from typing import List, Tuple

import pytest

from msic.instance import Instance, generate_random, parse_instance


def corpus_text(name: str) -> str:
    return (resources.files("msic") / "corpus" / name).read_text()


def corpus_instance(name: str) -> Instance:
    return parse_instance(corpus_text(name))


def random_suite(count: int = 50) -> List[Instance]:
    """The seeded K<=4, N<=3, delta<=0.5, r0<=2 cross-validation suite."""
    out = []
    for seed in range(count):
        rng = random.Random(seed)
        K = rng.randint(1, 4)
        N = rng.randint(1, 3)
        delta = rng.choice([0.0, 0.25, 0.5])
        r0 = rng.randint(0, min(2, K - 1))
        out.append(generate_random(K, N, delta=delta, r0=r0, seed=seed))
    return out


@pytest.fixture(scope="session")
def ex1() -> Instance:
    return corpus_instance("ex1.json")


@pytest.fixture(scope="session")
def ex2() -> Instance:
    return corpus_instance("ex2.json")


@pytest.fixture(scope="session")
def ex3() -> Instance:
    return corpus_instance("ex3.json")


# One line per acceptance criterion at the end of the run, regardless of
# output capturing.

_ACCEPTANCE: List[Tuple[str, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(num, text): labels an acceptance-criterion test"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None and report.when == "call":
        _ACCEPTANCE.append((marker.args[0], marker.args[1], report.outcome))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num, text, outcome in sorted(_ACCEPTANCE, key=lambda t: int(t[0])):
        word = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {num}: {word} - {text}")
