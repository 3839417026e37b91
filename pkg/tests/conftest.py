from __future__ import annotations

import pytest

from gausslat import e8_gram, gamma_2g, gaussify


def eye(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zi_power(n: int):
    return gaussify(eye(n), label=f"Zi^{n}")


def suite_lattices():
    """Every lattice exercised by the acceptance criteria."""
    out = [gamma_2g(g) for g in (2, 4, 6, 8)]
    out += [zi_power(n) for n in range(1, 11)]
    out.append(gaussify(e8_gram(), label="E8xZi"))
    return out


@pytest.fixture(scope="session")
def small_suite():
    """The suite members with g <= 4 (cheap enough for exhaustive checks)."""
    return [gamma_2g(2), gamma_2g(4), zi_power(1), zi_power(2), zi_power(3), zi_power(4)]


@pytest.fixture(scope="session")
def full_suite():
    return suite_lattices()
