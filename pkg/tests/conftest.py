"""Shared fixtures and the acceptance summary hook.

Acceptance tests register one result per numbered criterion; the terminal
summary prints a single pass/fail line for each so the gate is readable
at a glance even in long pytest output.
"""

import math
import pathlib

import pytest

from innerinv import Atom, InnerFunctionSpec, TangentialTail, classify_intervals

SPEC_DIR = pathlib.Path(__file__).resolve().parent.parent / "specs"

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}
ACCEPTANCE_TOTAL = 8


def record_criterion(number: int, passed: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS[number] = (passed, detail)


@pytest.fixture(scope="session")
def spec_dir() -> pathlib.Path:
    return SPEC_DIR


@pytest.fixture(scope="session")
def one_atom_spec() -> InnerFunctionSpec:
    return InnerFunctionSpec(atoms=(Atom(0.0, 1.0),))


@pytest.fixture(scope="session")
def two_atom_spec() -> InnerFunctionSpec:
    return InnerFunctionSpec(atoms=(Atom(0.0, 1.0), Atom(math.pi, 1.0)))


@pytest.fixture(scope="session")
def four_atom_spec() -> InnerFunctionSpec:
    return InnerFunctionSpec(
        atoms=tuple(Atom(k * math.pi / 2.0, 1.0) for k in range(4))
    )


@pytest.fixture(scope="session")
def tangential_pair_spec() -> InnerFunctionSpec:
    return InnerFunctionSpec(
        tails=(
            TangentialTail(0.0, "upper", 6.0),
            TangentialTail(math.pi, "upper", 6.0),
        )
    )


@pytest.fixture(scope="session")
def two_atom_report(two_atom_spec):
    return classify_intervals(two_atom_spec)


@pytest.fixture(scope="session")
def four_atom_report(four_atom_spec):
    return classify_intervals(four_atom_spec)


@pytest.fixture(scope="session")
def tangential_pair_report(tangential_pair_spec):
    return classify_intervals(tangential_pair_spec)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, ACCEPTANCE_TOTAL + 1):
        entry = ACCEPTANCE_RESULTS.get(number)
        if entry is None:
            terminalreporter.write_line(f"criterion {number}: NO RESULT")
            continue
        passed, detail = entry
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {detail}")
