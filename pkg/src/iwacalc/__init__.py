"""Exact computation with finitely generated torsion Iwasawa modules.

Arithmetic over discrete valuation rings finite over Z_p at explicit finite
precision, truncated power series with Weierstrass division/preparation,
finite abelian p-group lattice computations, one- and two-variable module
invariants, and the rank-two cyclicity classifier with its independent
solvability oracle.
"""

from .dvr import DvrElem, DvrSpec, eq_status, valuation
from .errors import (IrreducibleError, IwacalcError, NotFiniteAtBoundError,
                     ParseError, PreconditionError, PrecisionError)
from .series import (DistPoly, TruncSeries, newton_polygon, quad_split,
                     root_gap_valuation, sqrt, weierstrass_divide,
                     weierstrass_prepare)
from .finabel import (AdaptedGenerators, Endo, FinAbPGroup, Subgroup,
                      adapted_generators, check_kerim_free_case,
                      check_kerim_identity, check_kerim_nilpotent, image,
                      intersect, kernel, quotient_structure, subgroup_sum)
from .lambdamod import (ElementaryModule, KoikeEmbedding, LambdaPresentation,
                        POrder, ak_tensor_structure, char_series,
                        coinvariant_order_from_char,
                        elementary_coinvariant_order, first_nonvanishing_coeff,
                        pm_s_submodule_dim, snf_dvr, truncated_coinvariants)
from .twovar import (SPoly, TwoVarModule, char_det,
                     check_ann_char_consistency, evaluate_00,
                     series_agree_up_to_unit, specialize_T)
from .classify import (CrossValidateReport, Lambda2Input, NonSplitInput,
                       Verdict, criterion_solvable, cross_validate,
                       dim_coinvariants_nonsplit, is_cyclic_lambda2,
                       realize_profile)

__version__ = "0.1.0"
