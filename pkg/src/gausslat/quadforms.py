"""Quadratic forms on GF(2) vector spaces with values in Z/2 and Z/4.

A Z/4-valued form q associated to a symmetric bilinear form b satisfies the
polarization rule q(x+y) = q(x) + q(y) + 2 b(x,y), so it is determined by its
values on a basis together with b.  The Brown invariant sigma(q) in Z/8 is the
exact analogue of the Arf invariant for these forms; it is characterized by
the Gauss sum

    sum_x i**q(x) = 2**(n/2) * exp(i*pi*sigma/4),

which this module evaluates both ways: a polynomial-time normal-form path
(orthonormal or symplectic basis) and an exponential exact enumeration used
as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import gf2
from .errors import EnumerationLimitError, InternalCheckError, ValidationError

DEFAULT_GAUSS_BOUND = 20


@dataclass(frozen=True)
class F2BilinearSpace:
    """A GF(2) space with a nondegenerate symmetric bilinear form.

    ``rows[k]`` is the bitmask of the k-th row of the Gram matrix.
    """

    dim: int
    rows: tuple[int, ...]

    def __post_init__(self):
        n = self.dim
        if n <= 0:
            raise ValidationError("bilinear space dimension must be positive")
        if len(self.rows) != n or any(r >> n for r in self.rows):
            raise ValidationError("bilinear matrix shape does not match dimension")
        for j in range(n):
            for k in range(j + 1, n):
                if ((self.rows[j] >> k) ^ (self.rows[k] >> j)) & 1:
                    raise ValidationError("bilinear matrix is not symmetric")
        if gf2.rank(self.rows, n) != n:
            raise ValidationError("bilinear form is degenerate")

    def pair(self, x: int, y: int) -> int:
        """b(x, y) in GF(2)."""
        acc = 0
        for j in gf2.iter_bits(x):
            acc ^= self.rows[j] & y
        return gf2.parity(acc)

    def norm(self, x: int) -> int:
        """b(x, x); the map x -> b(x,x) is linear over GF(2)."""
        return gf2.parity(self.diag_mask() & x)

    def diag_mask(self) -> int:
        mask = 0
        for k in range(self.dim):
            mask |= ((self.rows[k] >> k) & 1) << k
        return mask

    def is_alternating(self) -> bool:
        return self.diag_mask() == 0

    def cross_terms(self, x: int) -> int:
        """Parity of sum over j < l in x of b(e_j, e_l)."""
        acc = 0
        rest = x
        for j in gf2.iter_bits(x):
            rest ^= 1 << j
            acc ^= gf2.parity(self.rows[j] & rest)
        return acc

    def pairing_vector(self, x: int) -> int:
        """Bitmask whose k-th bit is b(x, e_k)."""
        return gf2.vecmat(x, self.rows)


@dataclass(frozen=True)
class Z4Form:
    """Quadratic form V -> Z/4 associated to the space's bilinear form.

    Stored as the value diagonal on the fixed basis; evaluation goes through
    the polarization rule, so storage is O(n) regardless of dimension.
    """

    space: F2BilinearSpace
    diag: tuple[int, ...]

    def __post_init__(self):
        n = self.space.dim
        if len(self.diag) != n or any(not 0 <= d <= 3 for d in self.diag):
            raise ValidationError("diagonal must hold n residues mod 4")
        dmask = self.space.diag_mask()
        for k in range(n):
            if (self.diag[k] & 1) != ((dmask >> k) & 1):
                raise ValidationError(
                    "diagonal value parity must match b(e_k, e_k) (forced mod 2)"
                )

    def evaluate(self, x: int) -> int:
        """q(x) in Z/4 via polarization from the basis values."""
        if x >> self.space.dim:
            raise ValidationError("vector does not fit the space dimension")
        acc = 0
        rest = x
        for j in gf2.iter_bits(x):
            rest ^= 1 << j
            acc += self.diag[j] + 2 * gf2.parity(self.space.rows[j] & rest)
        return acc & 3

    def translate(self, alpha: int) -> "Z4Form":
        """The form (alpha + q)(x) = q(x) + 2 b(alpha, x)."""
        pv = self.space.pairing_vector(alpha)
        new = tuple((d + 2 * ((pv >> k) & 1)) & 3 for k, d in enumerate(self.diag))
        return Z4Form(self.space, new)


@dataclass(frozen=True)
class F2Form:
    """Ordinary GF(2) quadratic form on a symplectic space.

    Represents the halved form q' where the Z/4 form is q = 2 q'; satisfies
    q'(x+y) = q'(x) + q'(y) + b(x,y).
    """

    space: F2BilinearSpace
    diag_bits: int

    def __post_init__(self):
        if not self.space.is_alternating():
            raise ValidationError("F2 quadratic forms require an alternating space")
        if self.diag_bits >> self.space.dim:
            raise ValidationError("diagonal bits exceed the space dimension")

    def evaluate(self, x: int) -> int:
        if x >> self.space.dim:
            raise ValidationError("vector does not fit the space dimension")
        return gf2.parity(self.diag_bits & x) ^ self.space.cross_terms(x)

    def translate(self, alpha: int) -> "F2Form":
        """The form x -> q'(x) + b(alpha, x)."""
        return F2Form(self.space, self.diag_bits ^ self.space.pairing_vector(alpha))

    def doubled(self) -> Z4Form:
        """The associated Z/4 form q = 2 q'."""
        return Z4Form(self.space, tuple(2 * ((self.diag_bits >> k) & 1)
                                        for k in range(self.space.dim)))


@dataclass(frozen=True)
class GaussSum:
    """Exact Gaussian integer sum_x i**q(x)."""

    re: int
    im: int


def orthonormal_basis(space: F2BilinearSpace) -> tuple[int, ...]:
    """Orthonormal basis of a non-alternating nondegenerate GF(2) space.

    Greedy selection of non-isotropic vectors, with the standard repair step
    when the residual form turns alternating: a chosen orthonormal vector e
    plus a hyperbolic pair (a, b) is replaced by e+a+b, a+e, b+e.
    """
    if space.is_alternating():
        raise ValidationError("symplectic form has no orthonormal basis")
    n = space.dim
    work = gf2.identity(n)
    ortho: list[int] = []
    while work:
        v = next((w for w in work if space.norm(w)), None)
        if v is None:
            break
        work.remove(v)
        work = [w ^ (v if space.pair(w, v) else 0) for w in work]
        work = [w for w in work if w]
        ortho.append(v)
    if work:
        residual = _independent(work, n)
        pairs = _symplectic_pairs(space, residual)
        for a, b in pairs:
            e = ortho.pop()
            ortho.extend((e ^ a ^ b, a ^ e, b ^ e))
    if len(ortho) != n:
        raise InternalCheckError("orthonormalization lost rank")
    for i, u in enumerate(ortho):
        for j, w in enumerate(ortho):
            if space.pair(u, w) != (1 if i == j else 0):
                raise InternalCheckError("orthonormal basis check failed")
    return tuple(ortho)


def _independent(vectors, dim: int) -> list[int]:
    """Extract a maximal independent subfamily (row reduction)."""
    basis: list[tuple[int, int]] = []  # (pivot, reduced)
    out: list[int] = []
    for v in vectors:
        r = v
        for pivot, vec in basis:
            if (r >> pivot) & 1:
                r ^= vec
        if r:
            basis.append(((r & -r).bit_length() - 1, r))
            out.append(v)
    return out


def _symplectic_pairs(space: F2BilinearSpace, vectors: list[int]) -> list[tuple[int, int]]:
    """Symplectic Gram-Schmidt on the span of ``vectors`` (b alternating there)."""
    work = list(vectors)
    pairs: list[tuple[int, int]] = []
    while work:
        a = work.pop(0)
        if a == 0:
            continue
        b = next((w for w in work if space.pair(a, w)), None)
        if b is None:
            raise ValidationError("form is degenerate on the residual span")
        work.remove(b)
        projected = []
        for w in work:
            w ^= a if space.pair(w, b) else 0
            w ^= b if space.pair(w, a) else 0
            if w:
                projected.append(w)
        work = _independent(projected, space.dim)
        pairs.append((a, b))
    return pairs


def symplectic_basis_f2(space: F2BilinearSpace) -> tuple[tuple[int, int], ...]:
    """Hyperbolic pairs (a_j, b_j) with b(a_j, b_k) = delta_jk."""
    if not space.is_alternating():
        raise ValidationError("space is not alternating")
    if space.dim % 2:
        raise ValidationError("alternating nondegenerate spaces have even dimension")
    pairs = _symplectic_pairs(space, gf2.identity(space.dim))
    for j, (a, b) in enumerate(pairs):
        for k, (c, d) in enumerate(pairs):
            ok = (space.pair(a, d) == (1 if j == k else 0)
                  and space.pair(a, c) == 0 and space.pair(b, d) == 0)
            if not ok:
                raise InternalCheckError("symplectic basis check failed")
    return tuple(pairs)


def arf(q: F2Form) -> int:
    """Arf invariant: sum of q'(a_j) q'(b_j) over a symplectic basis."""
    pairs = symplectic_basis_f2(q.space)
    return arf_with_pairs(q, pairs)


def arf_with_pairs(q: F2Form, pairs) -> int:
    acc = 0
    for a, b in pairs:
        acc ^= q.evaluate(a) & q.evaluate(b)
    return acc


def brown(q: Z4Form) -> int:
    """Brown invariant sigma(q) in Z/8 via the normal-form path.

    Alternating b: sigma = 4 * Arf(q/2).  Otherwise sigma = g+ - g- counted on
    an orthonormal basis, where the restricted values are +-1.
    """
    if q.space.is_alternating():
        halved = F2Form(q.space, sum(((d >> 1) & 1) << k for k, d in enumerate(q.diag)))
        return (4 * arf(halved)) % 8
    basis = orthonormal_basis(q.space)
    return brown_with_basis(q, basis)


def brown_with_basis(q: Z4Form, basis) -> int:
    plus = minus = 0
    for u in basis:
        v = q.evaluate(u)
        if v == 1:
            plus += 1
        elif v == 3:
            minus += 1
        else:
            raise InternalCheckError("orthonormal value must be odd")
    if plus + minus != q.space.dim:
        raise InternalCheckError("orthonormal count mismatch")
    return (plus - minus) % 8


def gauss_sum(q: Z4Form, bound: int = DEFAULT_GAUSS_BOUND) -> GaussSum:
    """Exact sum of i**q(x) over all 2^n vectors (Gray-code enumeration)."""
    n = q.space.dim
    if n > bound:
        raise EnumerationLimitError(
            f"gauss_sum over 2^{n} vectors exceeds the bound {bound}"
        )
    rows = q.space.rows
    diag = q.diag
    counts = [0, 0, 0, 0]
    counts[0] = 1
    x = 0
    val = 0
    for t in range(1, 1 << n):
        k = (t & -t).bit_length() - 1
        val = (val + diag[k] + 2 * gf2.parity(rows[k] & x)) & 3
        x ^= 1 << k
        counts[val] += 1
    return GaussSum(counts[0] - counts[2], counts[1] - counts[3])


def sigma_from_gauss_sum(s: GaussSum, n: int) -> int:
    """Recover sigma in Z/8 from an exact Gauss sum of an n-dim form.

    Decided purely from the sign pattern of (re, im) and the parity of n;
    raises when the pair is not of the shape 2^(n/2) * exp(i*pi*sigma/4).
    """
    re, im = s.re, s.im
    if re * re + im * im != 1 << n:
        raise ValidationError("inconsistent Gauss sum")
    if n % 2 == 0:
        half = 1 << (n // 2)
        table = {(half, 0): 0, (0, half): 2, (-half, 0): 4, (0, -half): 6}
    else:
        half = 1 << ((n - 1) // 2)
        table = {(half, half): 1, (-half, half): 3, (-half, -half): 5, (half, -half): 7}
    sigma = table.get((re, im))
    if sigma is None:
        raise ValidationError("inconsistent Gauss sum")
    return sigma


def orthogonal_sum(q1: Z4Form, q2: Z4Form) -> Z4Form:
    """Orthogonal (block) sum of two Z/4 forms."""
    n1 = q1.space.dim
    rows = tuple(list(q1.space.rows) + [r << n1 for r in q2.space.rows])
    space = F2BilinearSpace(n1 + q2.space.dim, rows)
    return Z4Form(space, q1.diag + q2.diag)
