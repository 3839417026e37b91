"""Gaussian lattices, their invariant theta divisors, and vanishing thetanulls.

The package is organized bottom-up:

- ``gf2`` / ``intmat``: exact bit-packed GF(2) and integer/rational algebra
- ``quadforms``: quadratic forms over GF(2) and Z/4, Arf and Brown invariants,
  exact Gauss sums
- ``lattices``: construction and validation of Gaussian lattices, integral
  symplectic bases
- ``census``: two-torsion reduction, invariant form enumeration, multiplicity
  residues, and the vanishing-thetanull census
- ``theta``: period matrices, certified theta constants, cocycle checks, and
  the numeric confirmation of the census
- ``cli``: the ``gausslat`` command
"""

from .census import (
    CensusReport,
    InducedStructure,
    InvariantThetaForm,
    TwoTorsionSpace,
    base_invariant_form,
    census,
    closed_formula,
    enumerate_invariant_forms,
    induce,
    multiplicity_mod4,
    reduce,
)
from .errors import EnumerationLimitError, InternalCheckError, ValidationError
from .lattices import (
    Classification,
    GaussianLattice,
    SymplecticBasisZ,
    classify,
    direct_sum,
    e8_gram,
    gamma_2g,
    gaussify,
    load_lattice,
    make_lattice,
    save_lattice,
    symplectic_basis,
)
from .quadforms import (
    F2BilinearSpace,
    F2Form,
    GaussSum,
    Z4Form,
    arf,
    brown,
    gauss_sum,
    orthogonal_sum,
    orthonormal_basis,
    sigma_from_gauss_sum,
    symplectic_basis_f2,
)
from .theta import (
    Characteristic,
    PeriodMatrix,
    ThetaValue,
    cocycle_factor,
    form_to_characteristic,
    period_matrix,
    theta_constant,
    verify_census_numeric,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
