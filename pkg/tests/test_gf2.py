import random

import pytest

from gausslat import gf2


def random_matrix(rng, n):
    return [rng.getrandbits(n) for _ in range(n)]


def test_parity_and_dot():
    assert gf2.parity(0) == 0
    assert gf2.parity(0b1011) == 1
    assert gf2.dot(0b110, 0b011) == 1
    assert gf2.dot(0b110, 0b001) == 0


def test_rank_identity_and_singular():
    assert gf2.rank(gf2.identity(5), 5) == 5
    assert gf2.rank([0b11, 0b11, 0b01], 2) == 2
    assert gf2.rank([0b11, 0b11], 2) == 1


def test_transpose_involution():
    rng = random.Random(7)
    for n in (1, 3, 8, 17):
        m = random_matrix(rng, n)
        assert gf2.transpose(gf2.transpose(m, n), n) == m


def test_matmul_against_naive():
    rng = random.Random(11)
    n = 6
    for _ in range(20):
        a = random_matrix(rng, n)
        b = random_matrix(rng, n)
        prod = gf2.matmul(a, b)
        for i in range(n):
            for k in range(n):
                naive = 0
                for j in range(n):
                    naive ^= ((a[i] >> j) & 1) & ((b[j] >> k) & 1)
                assert ((prod[i] >> k) & 1) == naive


def test_solve_recovers_planted_solution():
    rng = random.Random(3)
    n = 10
    for _ in range(50):
        rows = random_matrix(rng, n)
        x = rng.getrandbits(n)
        rhs = [gf2.dot(r, x) for r in rows]
        sol = gf2.solve(rows, rhs, n)
        assert sol is not None
        assert all(gf2.dot(r, sol) == b for r, b in zip(rows, rhs))


def test_solve_detects_inconsistency():
    # x1 = 0 and x1 = 1
    assert gf2.solve([0b1, 0b1], [0, 1], 1) is None


def test_span_solver_roundtrip():
    rng = random.Random(5)
    n = 12
    vectors = []
    while len(vectors) < 5:
        v = rng.getrandbits(n)
        try:
            gf2.SpanSolver.build(vectors + [v])
        except ValueError:
            continue
        vectors.append(v)
    solver = gf2.SpanSolver.build(vectors)
    for coords in range(1 << 5):
        v = solver.combine(coords)
        assert solver.coords(v) == coords


def test_span_solver_outside_span():
    solver = gf2.SpanSolver.build([0b011, 0b110])
    assert solver.coords(0b101) == 0b11
    # (1,1,1) = 011 ^ 110 is in the span; try something not in it
    assert solver.coords(0b001) is None


def test_span_solver_rejects_dependent():
    with pytest.raises(ValueError):
        gf2.SpanSolver.build([0b01, 0b10, 0b11])
