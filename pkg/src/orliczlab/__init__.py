"""Orlicz spaces over quasi-Banach function spaces on finite atomic measure spaces."""

from .exceptions import (DomainOverflow, InvalidYoungFunction, MethodInapplicable,
                         NonConvergence, NotFound, NullSet, OrliczError,
                         PreconditionViolation, SizeExceeded, SpaceMismatch, UnknownFilter)
from .interp import (CalderonInstance, CalderonSpace, Factorization, calderon_norm_upper,
                     complex_interpolation, cp_orlicz_identity, interpolation_exponent,
                     l_convexity_search, l_convexity_transfer, lconvexity_delta,
                     orlicz_factorize, s_convexity_check)
from .orlicz import (OrliczSpace, bounded_set_transfer, char_norm, delta2_consequences,
                     inclusion_ratio, linf_embedding_bound, luxemburg, modular, norm_modular_relations,
                     vector_orlicz_identities)
from .qbfs import (L1Mu, L1Semivariation, L1Weak, LInf, PowerSpace, QuasiNormedSpace,
                   empirical_quasi_triangle, l1_mu, l1_semivar, l1w, linf, lp_semivar,
                   power_space, space_from_spec)
from .space import AtomicMeasureSpace
from .vecmeasure import (StepFunction, TargetNorm, VectorMeasure, choquet_l1_norm,
                         distribution_function, rybakov, scalar_variation, semivariation,
                         semivariation_bruteforce)
from .young import (ExpMinusOne, Power, PowerLog, Tabulated, YoungFunction, calderon_combine,
                    delta2_constant, diagnose, validate)

__version__ = "0.1.0"
