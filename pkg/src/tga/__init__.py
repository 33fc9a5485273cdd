"""Exact arithmetic and property deciders for twisted group algebras K_rho G over finite fields."""

from .algebra import (
    AlgebraElement,
    TwistedGroupAlgebra,
    alg_arith,
    center_basis,
    is_central,
    is_nilpotent,
    left_right_rep,
    nilradical_commutative,
    parse_element,
    restrict_equation,
    restrict_equation_batch,
    support,
)
from .catalog import InstanceSpec, default_catalog, load_config, parse_field
from .cocycle import (
    FactorSystem,
    Rescaling,
    apply_rescaling,
    coboundary,
    is_symmetric,
    lambda_pairing,
    make_factor_system,
    power_scalar,
    trivial,
    unit_power_rescaling,
    validate_factor_system,
)
from .deciders import (
    ClosureReport,
    Decision,
    Witness,
    decide_equivalences,
    decide_group_ring_n_weak,
    decide_n_weakly_regular,
    decide_no_nilpotents,
    decide_strongly_regular,
    decide_xi_N,
    n_weak_witness,
    oracle_nilpotent_search,
    oracle_property_scan,
    regularity_witness,
    strong_regularity_witness,
    sufficiently_closed,
    v_basis,
    witness_char_p,
    witness_quaternion,
    witness_unit_commutation,
    xiN_witness,
)
from .exceptions import *  # noqa: F401,F403
from .field import GF, FieldElem, FieldSpec, ff_arith, ff_integer_invertible, ff_isotropic, ff_nth_root
from .group import Group, build_group, cyclic, dihedral, direct_product, from_table, quaternion8
from .sweep import SweepReport, run_sweep, write_reports

__version__ = "0.1.0"
