"""Shared structures, frozen data and random generators for the test suite."""

from __future__ import annotations

import random
from itertools import combinations

import pytest

from plectic import Cotensor, NPlecticStructure, PoissonCotensor, Tensor, parse_cotensor, parse_tensor
from plectic.cli import fixture_path, parse_structure
from plectic.coefficients import random_polynomial
from plectic.nplectic import random_poisson

# Counterexample data on R^6, written out by hand.
R6_OMEGA = "dx1^dx3^dx5^dx6 + dx2^dx4^dx5^dx6"
F1 = "(x1^2*x3 - x4) dx5^dx6"
F2 = "-(x3 + x2^2*x4) dx5^dx6"
F3 = "dx1^dx2"
X1 = "x1^2 d1 - d2 - 2*x1*x3 d3"
X2 = "-d1 - x2^2 d2 + 2*x2*x4 d4"
Y1 = "(x1^2*x3 - x4) d3^d1"
Y2 = "-(x3 + x2^2*x4) d4^d2"


def r6_structure(bound: int = 4) -> NPlecticStructure:
    return NPlecticStructure(6, 3, parse_cotensor(R6_OMEGA, 6), bound)


def symplectic_r2() -> NPlecticStructure:
    return NPlecticStructure(2, 1, parse_cotensor("dx1^dx2", 2), 4)


@pytest.fixture(scope="session")
def r6() -> NPlecticStructure:
    return r6_structure()


@pytest.fixture(scope="session")
def r6_file():
    return parse_structure(fixture_path("r6_3plectic"))


@pytest.fixture(scope="session")
def sym2() -> NPlecticStructure:
    return symplectic_r2()


def cot(text: str, nvars: int = 6) -> Cotensor:
    return parse_cotensor(text, nvars)


def ten(text: str, nvars: int = 6) -> Tensor:
    return parse_tensor(text, nvars)


def random_element(cls, nvars: int, q: int, rng: random.Random, max_degree: int = 2, terms: int = 2):
    """Homogeneous (co)tensor of wedge length ``q`` with ``terms`` random directions."""
    directions = list(combinations(range(1, nvars + 1), q))
    out = cls.zero(nvars)
    for _ in range(terms):
        J = rng.choice(directions)
        out = out + cls(nvars, {J: random_polynomial(nvars, rng, max_degree)})
    return out


def function_bundle(S: NPlecticStructure, rng: random.Random, max_degree: int = 2) -> PoissonCotensor:
    """Random function on a symplectic plane with its Hamilton and constraint witnesses."""
    from plectic import make_poisson

    while True:
        f = Cotensor.scalar(S.nvars, random_polynomial(S.nvars, rng, max_degree))
        if f:
            return make_poisson(S, f)


def one_form(S: NPlecticStructure, rng: random.Random) -> PoissonCotensor:
    """Poisson 1-form with constant or linear coefficients.

    On the R^6 fixture most Poisson cotensors contain dx5^dx6, so their
    wedge products vanish; 1-forms are what makes products nonzero.
    """
    return random_poisson(S, rng, degrees=(S.n,), max_degree=rng.choice((0, 1)))


def rich(S: NPlecticStructure, rng: random.Random) -> PoissonCotensor:
    """Poisson cotensor of any form degree with quadratic witnesses."""
    return random_poisson(S, rng, degrees=tuple(range(1, S.n + 1)), max_degree=2)


# -- acceptance verdict lines ------------------------------------------------------

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def acceptance_lines(request) -> list:
    return request.config.stash[_ACCEPTANCE]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
