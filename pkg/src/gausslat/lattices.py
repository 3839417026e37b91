"""Gaussian lattices: positive definite integral lattices with a square -1 isometry.

A lattice is stored as an integer Gram matrix S together with an integer
automorphism matrix J satisfying J^2 = -I and J^T S J = S.  The derived
alternating form E = J^T S plays the role of the polarization; an integral
symplectic basis for E exists exactly when the lattice is unimodular.
All arithmetic in this module is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from . import intmat
from .errors import ValidationError

IntMatrix = tuple[tuple[int, ...], ...]


def _freeze(a) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in a)


@dataclass(frozen=True)
class GaussianLattice:
    rank: int
    gram: IntMatrix
    aut: IntMatrix
    eform: IntMatrix  # J^T S, skew-symmetric
    label: str

    def __repr__(self) -> str:  # keep huge matrices out of test output
        return f"GaussianLattice(label={self.label!r}, rank={self.rank})"


@dataclass(frozen=True)
class SymplecticBasisZ:
    """Integral basis with E(lam_j, lam_k) = E(mu_j, mu_k) = 0, E(lam_j, mu_k) = delta."""

    lam: tuple[tuple[int, ...], ...]
    mu: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Classification:
    unimodular: bool
    even: bool
    g: int


def _check_integer_entries(a, name: str):
    for row in a:
        for x in row:
            if not isinstance(x, int) or isinstance(x, bool):
                raise ValidationError(f"{name} entries must be integers")


def make_lattice(gram, aut, label: str = "") -> GaussianLattice:
    """Validate and build a Gaussian lattice from Gram and automorphism matrices."""
    gram = [list(row) for row in gram]
    aut = [list(row) for row in aut]
    n = len(gram)
    if n == 0 or not intmat.is_square(gram) or not intmat.is_square(aut) or len(aut) != n:
        raise ValidationError("gram and aut must be square matrices of equal size")
    if n % 2:
        raise ValidationError("rank must be even")
    _check_integer_entries(gram, "gram")
    _check_integer_entries(aut, "aut")
    if not intmat.is_symmetric(gram):
        raise ValidationError("gram is not symmetric")
    minors = intmat.leading_minors(gram)
    for k, mv in enumerate(minors):
        if mv <= 0:
            raise ValidationError(
                f"gram is not positive definite (leading minor {k + 1} is {mv})"
            )
    if intmat.matmul(aut, aut) != intmat.neg(intmat.identity(n)):
        raise ValidationError("aut squared is not minus the identity")
    at = intmat.transpose(aut)
    if intmat.matmul(at, intmat.matmul(gram, aut)) != gram:
        raise ValidationError("aut does not preserve gram")
    eform = intmat.matmul(at, gram)
    if not intmat.is_skew(eform):
        raise ValidationError("derived alternating form is not skew-symmetric")
    return GaussianLattice(n, _freeze(gram), _freeze(aut), _freeze(eform), label)


def classify(lattice: GaussianLattice) -> Classification:
    """Unimodularity (det S = 1), evenness (even diagonal), half rank g."""
    d = intmat.det([list(r) for r in lattice.gram])
    even = all(lattice.gram[k][k] % 2 == 0 for k in range(lattice.rank))
    return Classification(unimodular=(d == 1), even=even, g=lattice.rank // 2)


def direct_sum(l1: GaussianLattice, l2: GaussianLattice) -> GaussianLattice:
    label = f"{l1.label}+{l2.label}" if l1.label or l2.label else ""
    return make_lattice(
        intmat.block_diag([list(r) for r in l1.gram], [list(r) for r in l2.gram]),
        intmat.block_diag([list(r) for r in l1.aut], [list(r) for r in l2.aut]),
        label,
    )


def gaussify(gram0, label: str = "") -> GaussianLattice:
    """Extension of scalars to the Gaussian integers, in the interleaved basis.

    Basis order is (v_1, i v_1, v_2, i v_2, ...): the Gram matrix becomes
    gram0 tensor I_2 and the automorphism a block diagonal of 2x2 rotations.
    The result is unimodular (resp. even) exactly when gram0 is.
    """
    gram0 = [list(row) for row in gram0]
    n = len(gram0)
    if n == 0 or not intmat.is_square(gram0):
        raise ValidationError("gram0 must be a nonempty square matrix")
    gram = intmat.zeros(2 * n, 2 * n)
    aut = intmat.zeros(2 * n, 2 * n)
    for j in range(n):
        for k in range(n):
            gram[2 * j][2 * k] = gram0[j][k]
            gram[2 * j + 1][2 * k + 1] = gram0[j][k]
        aut[2 * j][2 * j + 1] = -1
        aut[2 * j + 1][2 * j] = 1
    return make_lattice(gram, aut, label or f"gauss({n})")


def gamma_2g(g: int) -> GaussianLattice:
    """The rank-2g unimodular lattice of half-integer vectors with even sum.

    Concretely the D-plus family: integer vectors with even coordinate sum,
    glued with the all-halves vector; requires g even.  The isometry maps
    e_{2j-1} to e_{2j} in the ambient coordinates.  Rank 8 (g = 4) is the E8
    root lattice; the lattice is even exactly when g is divisible by 4.
    """
    if not isinstance(g, int) or g <= 0 or g % 2:
        raise ValidationError("the half-integer glue vector requires even positive g")
    n = 2 * g
    half = Fraction(1, 2)
    basis: list[list[Fraction]] = []
    row = [Fraction(0)] * n
    row[0] = Fraction(2)
    basis.append(row)
    for j in range(n - 2):
        row = [Fraction(0)] * n
        row[j] = Fraction(-1)
        row[j + 1] = Fraction(1)
        basis.append(row)
    basis.append([half] * n)

    gram = [[sum(a * b for a, b in zip(basis[j], basis[k])) for k in range(n)]
            for j in range(n)]
    for j in range(n):
        for k in range(n):
            if gram[j][k].denominator != 1:
                raise ValidationError("glue construction produced a non-integral Gram entry")
    gram_int = [[int(x) for x in row] for row in gram]

    # ambient isometry: e_{2j-1} -> e_{2j}, e_{2j} -> -e_{2j-1}
    amb = intmat.zeros(n, n)
    for j in range(g):
        amb[2 * j + 1][2 * j] = 1
        amb[2 * j][2 * j + 1] = -1
    bt = intmat.transpose(basis)
    image = intmat.matmul([[Fraction(x) for x in row] for row in amb], bt)
    coords = intmat.fraction_solve(bt, image)
    if coords is None:
        raise ValidationError("glue basis is singular")
    for row in coords:
        for x in row:
            if x.denominator != 1:
                raise ValidationError("isometry is not integral in the glue basis")
    aut = [[int(x) for x in row] for row in coords]
    return make_lattice(gram_int, aut, f"Gamma{n}")


def e8_gram() -> IntMatrix:
    """An E8 Gram matrix (the rank-8 member of the glue family)."""
    return gamma_2g(4).gram


def symplectic_basis(lattice: GaussianLattice) -> SymplecticBasisZ:
    """Integral symplectic basis for E = J^T S via the skew normal form.

    Pivots on the entry of least magnitude and reduces, so it terminates with
    all elementary divisors; the first divisor different from 1 aborts with a
    validation error (the lattice is then not unimodular).
    """
    n = lattice.rank
    e = [list(row) for row in lattice.eform]
    basis = intmat.identity(n)

    def add_vec(dst: int, src: int, c: int):
        # w_dst += c * w_src; congruence op on rows and columns of e
        for j in range(n):
            basis[dst][j] += c * basis[src][j]
        for j in range(n):
            e[dst][j] += c * e[src][j]
        for i in range(n):
            e[i][dst] += c * e[i][src]

    def swap_vec(i: int, j: int):
        basis[i], basis[j] = basis[j], basis[i]
        e[i], e[j] = e[j], e[i]
        for row in e:
            row[i], row[j] = row[j], row[i]

    m = 0
    while m < n:
        best = None
        for i in range(m, n):
            for j in range(i + 1, n):
                v = abs(e[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            raise ValidationError(
                "lattice is not unimodular: elementary divisor 0 in the alternating form"
            )
        _, i, j = best
        if i != m:
            swap_vec(m, i)
            if j == m:
                j = i
        if j != m + 1:
            swap_vec(m + 1, j)
        if e[m][m + 1] < 0:
            swap_vec(m, m + 1)
        pivot = e[m][m + 1]
        clean = True
        for r in range(m + 2, n):
            a = e[m][r]
            if a:
                add_vec(r, m + 1, -(a // pivot))
                if e[m][r]:
                    clean = False
            b = e[m + 1][r]
            if b:
                add_vec(r, m, b // pivot)
                if e[m + 1][r]:
                    clean = False
        if clean and all(e[m][r] == 0 and e[m + 1][r] == 0 for r in range(m + 2, n)):
            if pivot != 1:
                raise ValidationError(
                    f"lattice is not unimodular: elementary divisor {pivot}"
                )
            m += 2

    lam = tuple(tuple(basis[2 * t]) for t in range(n // 2))
    mu = tuple(tuple(basis[2 * t + 1]) for t in range(n // 2))
    _check_symplectic(lattice, lam, mu)
    return SymplecticBasisZ(lam, mu)


def _check_symplectic(lattice: GaussianLattice, lam, mu):
    g = lattice.rank // 2
    e = lattice.eform

    def pairing(u, v):
        return sum(u[a] * e[a][b] * v[b] for a in range(2 * g) for b in range(2 * g))

    for j in range(g):
        for k in range(g):
            if pairing(lam[j], lam[k]) != 0 or pairing(mu[j], mu[k]) != 0:
                raise ValidationError("basis is not isotropic on its halves")
            if pairing(lam[j], mu[k]) != (1 if j == k else 0):
                raise ValidationError("basis pairing is not the standard symplectic one")
    full = [list(v) for v in lam] + [list(v) for v in mu]
    if abs(intmat.det(full)) != 1:
        raise ValidationError("symplectic vectors do not form a lattice basis")


def change_basis(lattice: GaussianLattice, u, u_inv) -> GaussianLattice:
    """The same lattice in a new basis: gram -> U^T S U, aut -> U^{-1} J U."""
    ut = intmat.transpose(u)
    gram = intmat.matmul(ut, intmat.matmul([list(r) for r in lattice.gram], u))
    aut = intmat.matmul(u_inv, intmat.matmul([list(r) for r in lattice.aut], u))
    return make_lattice(gram, aut, lattice.label)


def random_unimodular(dim: int, rng, steps: int | None = None):
    """Random GL(dim, Z) matrix as a product of bounded elementary operations.

    Returns (U, U_inv), both exact.
    """
    u = intmat.identity(dim)
    u_inv = intmat.identity(dim)
    ops = []
    for _ in range(steps if steps is not None else 4 * dim):
        kind = rng.randrange(3)
        i = rng.randrange(dim)
        j = rng.randrange(dim)
        if kind == 0 and i != j:
            ops.append(("add", i, j, rng.choice((-2, -1, 1, 2))))
        elif kind == 1 and i != j:
            ops.append(("swap", i, j, 0))
        else:
            ops.append(("flip", i, 0, 0))
    for kind, i, j, c in ops:
        if kind == "add":
            for k in range(dim):
                u[i][k] += c * u[j][k]
        elif kind == "swap":
            u[i], u[j] = u[j], u[i]
        else:
            u[i] = [-x for x in u[i]]
    for kind, i, j, c in reversed(ops):
        if kind == "add":
            for k in range(dim):
                u_inv[i][k] -= c * u_inv[j][k]
        elif kind == "swap":
            u_inv[i], u_inv[j] = u_inv[j], u_inv[i]
        else:
            u_inv[i] = [-x for x in u_inv[i]]
    # ops were applied to rows; invert order gives U^{-1} acting on rows too,
    # so compose as matrices to double-check
    u_mat = u
    u_inv_mat = u_inv
    if intmat.matmul(u_inv_mat, u_mat) != intmat.identity(dim):
        raise AssertionError("unimodular inverse bookkeeping failed")
    return u_mat, u_inv_mat


def to_json_dict(lattice: GaussianLattice) -> dict:
    return {
        "label": lattice.label,
        "rank": lattice.rank,
        "gram": [list(row) for row in lattice.gram],
        "aut": [list(row) for row in lattice.aut],
    }


def from_json_dict(data: dict) -> GaussianLattice:
    try:
        label = data["label"]
        rank = data["rank"]
        gram = data["gram"]
        aut = data["aut"]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"lattice file is missing key: {exc}") from exc
    if not isinstance(label, str) or not isinstance(rank, int):
        raise ValidationError("lattice file types are invalid")
    if len(gram) != rank or len(aut) != rank:
        raise ValidationError("lattice file rank does not match matrix shape")
    return make_lattice(gram, aut, label)


def load_lattice(path) -> GaussianLattice:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"lattice file is not valid JSON: {exc}") from exc
    return from_json_dict(data)


def save_lattice(lattice: GaussianLattice, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json_dict(lattice), fh, sort_keys=True)
        fh.write("\n")
