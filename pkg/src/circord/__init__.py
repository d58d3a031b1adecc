"""Exact computations with circular orderings of groups."""

from .construct import (CentralQuotient, CofinalCentralDatum, ConstructionError, LexExtension, ShortExactSequence,
                        approx_dn, approx_rot, convergence_table, genuine_sequence, lex_extend, pullback,
                        quotient_circular)
from .enumeration import (ConeCandidate, EnumerationOverflow, canonical_tararin_cones, enumerate_co_cyclic,
                          enumerate_lo_ball)
from .groups import (Cyclic, DirectProduct, FreeAbelian, Heisenberg, Morphism, Tararin, TararinExt, ball,
                     invert, multiply)
from .lift import LiftElement, LiftGroup, cocycle_f, floor, lift_cone, power_floor
from .orders import (CircularOrder, CyclicStandard, LeftOrder, SecretOrder, conjugate, cone_from_secret,
                     lex_cone, neighborhood_Un, secret_from_left, validate)
from .semiconj import (Certified, Exact, Verdict, VerdictKind, check_conjugation_invariance, is_secret,
                       rot_estimate, rot_exact, rotation, semiconjugate, tau)

__version__ = "0.1.0"
