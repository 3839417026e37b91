"""Two-torsion analysis of unimodular Gaussian lattices.

Reduction mod 2 of a lattice with isometry i yields a symplectic GF(2) space
with an operator eps = 1 + i satisfying eps^2 = 0.  The fixed subspace is the
Lagrangian image of eps; the squared-length form descends to a Z/4 form Q.
Enumerating the i-invariant quadratic forms attached to the symplectic
pairing, inducing a Z/4 form on the fixed subspace and taking its Brown
invariant determines the residue mod 4 of the multiplicity at 0 of each
invariant theta divisor.  The census counts these residues and compares the
vanishing count (residue 2) against the closed formula.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import gf2
from .errors import InternalCheckError, ValidationError
from .lattices import GaussianLattice, classify, symplectic_basis
from .quadforms import (
    DEFAULT_GAUSS_BOUND,
    F2BilinearSpace,
    F2Form,
    Z4Form,
    arf_with_pairs,
    brown,
    brown_with_basis,
    gauss_sum,
    orthonormal_basis,
    sigma_from_gauss_sum,
    symplectic_basis_f2,
)


def vector_mod2(v) -> int:
    """Bitmask of an integer vector reduced mod 2."""
    mask = 0
    for j, x in enumerate(v):
        mask |= (x & 1) << j
    return mask


@dataclass(frozen=True)
class TwoTorsionSpace:
    """The 2-torsion of a unimodular Gaussian lattice with its full structure.

    Fields: the Weil pairing e (= E mod 2, alternating), the reduced isometry
    jbar, eps = 1 + jbar with image = kernel = the invariant Lagrangian, the
    Z/4 form Q from squared lengths, a basis of the invariant subspace, and a
    linear section assigning to each invariant vector an eps-preimage.
    """

    g: int
    e_space: F2BilinearSpace
    jbar: tuple[int, ...]
    epsilon: tuple[int, ...]
    q_big: Z4Form
    ai_basis: tuple[int, ...]
    section_basis: tuple[int, ...]
    _solver: gf2.SpanSolver

    @property
    def dim(self) -> int:
        return 2 * self.g

    def ai_coords(self, v: int) -> int:
        c = self._solver.coords(v)
        if c is None:
            raise ValidationError("vector is not in the invariant subspace")
        return c

    def ai_vector(self, coords: int) -> int:
        return self._solver.combine(coords)

    def section(self, coords: int) -> int:
        acc = 0
        for t in gf2.iter_bits(coords):
            acc ^= self.section_basis[t]
        return acc

    def in_ai(self, v: int) -> bool:
        return self._solver.coords(v) is not None


@dataclass(frozen=True)
class InvariantThetaForm:
    """A quadratic form q' on the 2-torsion, attached to e and i-invariant."""

    form: F2Form


@dataclass(frozen=True)
class InducedStructure:
    """Nondegenerate pairing b and Z/4 form Q_q on the invariant subspace."""

    bspace: F2BilinearSpace
    qq: Z4Form


@dataclass(frozen=True)
class FormRecord:
    index: int
    sigma: int
    m0_mod4: int
    arf_a2: int
    char_a: tuple[int, ...]
    char_b: tuple[int, ...]


@dataclass(frozen=True)
class CensusReport:
    label: str
    g: int
    lattice_parity: str  # "even" or "odd"
    forms: tuple[FormRecord, ...]
    counts: tuple[int, int, int, int]
    formula_value: int
    match: bool

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "g": self.g,
            "lattice_parity": self.lattice_parity,
            "forms": [
                {
                    "index": f.index,
                    "sigma": f.sigma,
                    "m0_mod4": f.m0_mod4,
                    "arf_A2": f.arf_a2,
                    "char_a": list(f.char_a),
                    "char_b": list(f.char_b),
                }
                for f in self.forms
            ],
            "counts": {"m0": list(self.counts)},
            "formula": self.formula_value,
            "match": self.match,
        }

    def json_str(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))


def reduce(lattice: GaussianLattice) -> TwoTorsionSpace:
    """Reduce a unimodular Gaussian lattice mod 2 and certify the structure."""
    cls = classify(lattice)
    if not cls.unimodular:
        raise ValidationError("two-torsion reduction requires a unimodular lattice")
    n = lattice.rank
    g = cls.g
    # eform is skew with zero diagonal, so its mod-2 reduction is symmetric
    # and alternating
    e_rows = tuple(vector_mod2(lattice.eform[k]) for k in range(n))
    jbar = tuple(vector_mod2(lattice.aut[k]) for k in range(n))
    epsilon = tuple(jbar[k] ^ (1 << k) for k in range(n))

    e_space = F2BilinearSpace(n, e_rows)
    if not e_space.is_alternating():
        raise InternalCheckError("Weil pairing must be alternating")

    s_rows = tuple(vector_mod2(lattice.gram[k]) for k in range(n))
    q_space = F2BilinearSpace(n, s_rows)
    q_big = Z4Form(q_space, tuple(lattice.gram[k][k] % 4 for k in range(n)))

    # column space of eps; rows encode the matrix acting on column vectors,
    # so column k of eps is the image of e_k
    eps_cols = gf2.transpose(epsilon, n)
    ai_basis: list[int] = []
    section_basis: list[int] = []
    table: list[tuple[int, int]] = []
    for k in range(n):
        v = eps_cols[k]
        r = v
        for pivot, vec in table:
            if (r >> pivot) & 1:
                r ^= vec
        if r:
            table.append(((r & -r).bit_length() - 1, r))
            ai_basis.append(v)
            section_basis.append(1 << k)
        if len(ai_basis) == g:
            break
    if len(ai_basis) != g:
        raise InternalCheckError("invariant subspace has wrong dimension")

    space = TwoTorsionSpace(
        g=g,
        e_space=e_space,
        jbar=jbar,
        epsilon=epsilon,
        q_big=q_big,
        ai_basis=tuple(ai_basis),
        section_basis=tuple(section_basis),
        _solver=gf2.SpanSolver.build(tuple(ai_basis)),
    )
    _certify_two_torsion(space)
    return space


def _apply(rows, x: int) -> int:
    """Matrix (given row-wise) applied to a column bit vector."""
    out = 0
    for k, row in enumerate(rows):
        out |= gf2.parity(row & x) << k
    return out


def _certify_two_torsion(t: TwoTorsionSpace):
    n = t.dim
    eps = t.epsilon
    # eps^2 = 0 and rank g (hence image = kernel)
    eps_cols = gf2.transpose(eps, n)
    for k in range(n):
        if _apply(eps, eps_cols[k]) != 0:
            raise InternalCheckError("eps squared is nonzero")
    if gf2.rank(list(eps), n) != t.g:
        raise InternalCheckError("eps has wrong rank")
    # invariant subspace is Lagrangian for e
    for u in t.ai_basis:
        for v in t.ai_basis:
            if t.e_space.pair(u, v):
                raise InternalCheckError("invariant subspace is not isotropic")
    # e(a, eps b) = e(eps a, b) as the matrix identity E*eps = eps^T*E
    e_rows = t.e_space.rows
    left = gf2.matmul(list(e_rows), list(eps))
    right = gf2.matmul(gf2.transpose(eps, n), list(e_rows))
    if left != right:
        raise InternalCheckError("eps is not self-adjoint for e")
    # Q is attached to (a, b) -> e(a, jbar b), whose matrix E*jbar reduces to
    # S mod 2 since E J = S over the integers
    s_rows = t.q_big.space.rows
    ej_rows = gf2.matmul(list(e_rows), list(t.jbar))
    if tuple(ej_rows) != tuple(s_rows):
        raise InternalCheckError("squared-length pairing does not match e(a, jbar b)")
    # Q(eps a) = 2 Q(a): linear defect, so basis values suffice, plus the
    # vanishing of S on the invariant subspace mod 2
    for k in range(n):
        if (t.q_big.evaluate(eps_cols[k]) - 2 * t.q_big.evaluate(1 << k)) % 4:
            raise InternalCheckError("Q(eps a) = 2 Q(a) fails on a basis vector")
    for u in t.ai_basis:
        for v in t.ai_basis:
            if t.q_big.space.pair(u, v):
                raise InternalCheckError("S mod 2 does not vanish on the invariant subspace")
    # section inverts eps on the chosen basis
    for u, x in zip(t.ai_basis, t.section_basis):
        if _apply(eps, x) != u:
            raise InternalCheckError("section is not an eps-preimage")


def base_invariant_form(t: TwoTorsionSpace) -> InvariantThetaForm:
    """One i-invariant form attached to e, from the GF(2) linear system.

    The defect d(x) = q'(jbar x) + q'(x) is linear because e is i-invariant,
    so invariance amounts to one linear condition per basis vector on the
    unknown diagonal values.
    """
    n = t.dim
    jbar_cols = gf2.transpose(t.jbar, n)
    rows = []
    rhs = []
    for k in range(n):
        w = jbar_cols[k]
        rows.append(w ^ (1 << k))
        rhs.append(t.e_space.cross_terms(w))
    sol = gf2.solve(rows, rhs, n)
    if sol is None:
        raise InternalCheckError("invariant form must exist")
    form = F2Form(t.e_space, sol)
    _check_invariance(t, form)
    return InvariantThetaForm(form)


def _check_invariance(t: TwoTorsionSpace, form: F2Form):
    jbar_cols = gf2.transpose(t.jbar, t.dim)
    for k in range(t.dim):
        if form.evaluate(jbar_cols[k]) != form.evaluate(1 << k):
            raise InternalCheckError("form is not i-invariant")


def enumerate_invariant_forms(t: TwoTorsionSpace) -> tuple[InvariantThetaForm, ...]:
    """All 2^g i-invariant forms: the base form translated across the
    invariant subspace, in lexicographic order of translation coordinates."""
    base = base_invariant_form(t)
    out = []
    for c in range(1 << t.g):
        alpha = t.ai_vector(c)
        out.append(InvariantThetaForm(base.form.translate(alpha)))
    return tuple(out)


def induce(t: TwoTorsionSpace, qp: InvariantThetaForm) -> InducedStructure:
    """Descend (e, q') to the invariant subspace: pairing b and Z/4 form Q_q.

    b(eps a, eps b) = e(a, eps b) and Q_q(eps a) = 2 q'(a) - Q(a); both are
    checked against a second eps-preimage per basis vector, which certifies
    well-definedness (it fails exactly when q' is not i-invariant).
    """
    g = t.g
    rows = []
    for s in range(g):
        x_s = t.section_basis[s]
        mask = 0
        for u_t in range(g):
            mask |= t.e_space.pair(x_s, t.ai_basis[u_t]) << u_t
        rows.append(mask)
    try:
        bspace = F2BilinearSpace(g, tuple(rows))
    except ValidationError as exc:
        raise InternalCheckError(f"induced pairing invalid: {exc}") from exc

    def qq_value(x: int) -> int:
        return (2 * qp.form.evaluate(x) - t.q_big.evaluate(x)) % 4

    diag = []
    for s in range(g):
        x_s = t.section_basis[s]
        alt = x_s ^ t.ai_basis[(s + 1) % g] if g > 1 else x_s ^ t.ai_basis[0]
        v = qq_value(x_s)
        if qq_value(alt) != v:
            raise InternalCheckError("induced form depends on the eps-preimage")
        for u_t in range(g):
            if t.e_space.pair(alt, t.ai_basis[u_t]) != ((rows[s] >> u_t) & 1):
                raise InternalCheckError("induced pairing depends on the eps-preimage")
        diag.append(v)
    try:
        qq = Z4Form(bspace, tuple(diag))
    except ValidationError as exc:
        raise InternalCheckError(f"induced form invalid: {exc}") from exc
    return InducedStructure(bspace, qq)


def multiplicity_mod4(t: TwoTorsionSpace, qp: InvariantThetaForm, alpha: int) -> int:
    """Residue mod 4 of the theta-divisor multiplicity at the invariant point.

    Solves 2 m = sigma(Q_q) + g - 2 Q_q(alpha) (mod 8); the right side is
    even because sigma(Q_q) = g (mod 2), which is asserted.
    """
    coords = t.ai_coords(alpha)
    ind = induce(t, qp)
    sigma = brown(ind.qq)
    return _m_from_sigma(sigma, t.g, ind.qq.evaluate(coords))


def _m_from_sigma(sigma: int, g: int, qq_alpha: int) -> int:
    if (sigma - g) % 2:
        raise InternalCheckError("Brown invariant parity violates sigma = g (mod 2)")
    rhs = (sigma + g - 2 * qq_alpha) % 8
    return (rhs // 2) % 4


def closed_formula(g: int, even: bool) -> int:
    """Exact count of invariant divisors with multiplicity residue 2 mod 4.

    Even lattices (4 | g): 2^(g/2 - 1) (2^(g/2) - (-1)^(g/4)).  Odd lattices:
    the binomial sum C(g,2) + C(g,6) + ..., kept exact rather than using the
    cosine closed form.
    """
    if even:
        if g % 4:
            raise ValidationError("even unimodular Gaussian lattices require 4 | g")
        h = g // 2
        return (1 << (h - 1)) * ((1 << h) - (-1) ** (g // 4))
    return sum(math.comb(g, k) for k in range(2, g + 1, 4))


# characteristic convention: a from values on the lambda half, b from the mu
# half of the symplectic basis reduced mod 2 (validated end to end by the
# numeric vanishing pattern of the rank-8 glue lattice)
def characteristic_bits(qp: InvariantThetaForm, lam_bits, mu_bits) -> tuple[tuple[int, ...], tuple[int, ...]]:
    a = tuple(qp.form.evaluate(v) for v in lam_bits)
    b = tuple(qp.form.evaluate(v) for v in mu_bits)
    return a, b


def _check_mod2_symplectic(t: TwoTorsionSpace, lam_bits, mu_bits):
    g = t.g
    for j in range(g):
        for k in range(g):
            if t.e_space.pair(lam_bits[j], lam_bits[k]) or t.e_space.pair(mu_bits[j], mu_bits[k]):
                raise InternalCheckError("mod-2 basis halves are not isotropic")
            if t.e_space.pair(lam_bits[j], mu_bits[k]) != (1 if j == k else 0):
                raise InternalCheckError("mod-2 basis pairing is not standard")


def _form_payload(args):
    (t, qp, index, g, gauss_bound, e_pairs, onb, b_pairs, lam_bits, mu_bits) = args
    ind = induce(t, qp)
    if onb is not None:
        sigma = brown_with_basis(ind.qq, onb)
    else:
        halved = F2Form(ind.bspace, sum((((d >> 1) & 1) << k) for k, d in enumerate(ind.qq.diag)))
        sigma = (4 * arf_with_pairs(halved, b_pairs)) % 8
    if g <= gauss_bound:
        oracle = sigma_from_gauss_sum(gauss_sum(ind.qq, bound=gauss_bound), g)
        if oracle != sigma:
            raise InternalCheckError("Brown invariant disagrees with the Gauss-sum oracle")
    m0 = _m_from_sigma(sigma, g, 0)
    arf2 = arf_with_pairs(qp.form, e_pairs)
    char_a, char_b = characteristic_bits(qp, lam_bits, mu_bits)
    return FormRecord(index, sigma, m0, arf2, char_a, char_b)


def census(
    lattice: GaussianLattice,
    *,
    gauss_bound: int = DEFAULT_GAUSS_BOUND,
    workers: int = 1,
) -> CensusReport:
    """Full vanishing-thetanull census of a unimodular Gaussian lattice.

    Per form: Brown invariant of the induced Z/4 form (cross-checked against
    the exact Gauss-sum oracle when g is within the enumeration bound), the
    multiplicity residue at 0, the parity on the full 2-torsion, and the
    half-integer characteristic.  Aggregates are compared with the closed
    formula.
    """
    cls = classify(lattice)
    if not cls.unimodular:
        raise ValidationError("census requires a unimodular lattice")
    t = reduce(lattice)
    basis = symplectic_basis(lattice)
    lam_bits = tuple(vector_mod2(v) for v in basis.lam)
    mu_bits = tuple(vector_mod2(v) for v in basis.mu)
    _check_mod2_symplectic(t, lam_bits, mu_bits)

    forms = enumerate_invariant_forms(t)
    e_pairs = symplectic_basis_f2(t.e_space)
    ind0 = induce(t, forms[0])
    if ind0.bspace.is_alternating():
        onb = None
        b_pairs = symplectic_basis_f2(ind0.bspace)
    else:
        onb = orthonormal_basis(ind0.bspace)
        b_pairs = None
    if ind0.bspace.is_alternating() != cls.even:
        raise InternalCheckError("induced pairing parity disagrees with lattice parity")

    payloads = [
        (t, qp, i, t.g, gauss_bound, e_pairs, onb, b_pairs, lam_bits, mu_bits)
        for i, qp in enumerate(forms)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_form_payload, payloads, chunksize=max(1, len(payloads) // (4 * workers))))
    else:
        records = [_form_payload(p) for p in payloads]

    counts = [0, 0, 0, 0]
    for rec in records:
        counts[rec.m0_mod4] += 1
    if sum(counts) != 1 << t.g:
        raise InternalCheckError("census lost forms")
    formula = closed_formula(t.g, cls.even)
    return CensusReport(
        label=lattice.label,
        g=t.g,
        lattice_parity="even" if cls.even else "odd",
        forms=tuple(records),
        counts=tuple(counts),
        formula_value=formula,
        match=(counts[2] == formula),
    )


def one_minus_i_power(g: int) -> tuple[int, int]:
    """(1 - i)^g as an exact Gaussian integer (re, im)."""
    re, im = 1, 0
    for _ in range(g):
        re, im = re + im, im - re
    return re, im


def _rotate(re: int, im: int, k: int) -> tuple[int, int]:
    for _ in range(k % 4):
        re, im = -im, re
    return re, im


def trace_identity_report(lattice: GaussianLattice, *, gauss_bound: int = DEFAULT_GAUSS_BOUND) -> dict:
    """Exact check of sum over the invariant subspace of i^{Q_q} against
    (1-i)^g i^{(sigma+g)/2}, for every invariant form; zero tolerance."""
    t = reduce(lattice)
    g = t.g
    if g > gauss_bound:
        raise ValidationError(f"trace identity enumeration needs g <= {gauss_bound}")
    forms = enumerate_invariant_forms(t)
    failures = []
    for i, qp in enumerate(forms):
        ind = induce(t, qp)
        s = gauss_sum(ind.qq, bound=gauss_bound)
        sigma = brown(ind.qq)
        if (sigma - g) % 2:
            failures.append({"index": i, "reason": "sigma parity"})
            continue
        k = ((sigma + g) // 2) % 4
        re, im = _rotate(*one_minus_i_power(g), k)
        if (s.re, s.im) != (re, im):
            failures.append(
                {"index": i, "reason": "trace", "lhs": [s.re, s.im], "rhs": [re, im]}
            )
    return {"forms": len(forms), "failures": failures, "pass": not failures}


def syzygy_parity_report(report: CensusReport, even: bool) -> dict:
    """Even lattices carry only even forms (Arf 0 on the full 2-torsion);
    for every lattice the multiplicity parity equals that Arf invariant."""
    syzygy_failures = [f.index for f in report.forms if even and f.arf_a2 != 0]
    parity_failures = [f.index for f in report.forms if f.m0_mod4 % 2 != f.arf_a2]
    return {
        "syzygy_checked": even,
        "syzygy_failures": syzygy_failures,
        "parity_failures": parity_failures,
        "pass": not syzygy_failures and not parity_failures,
    }
