"""Real-symmetric algebraic and Dirichlet polynomials that approximate zeta
on expanding compact sets while interpolating at its zeros and pole."""
from .fitting import (ConstraintFunctional, FitProblem, FitReport, assemble_constraints,
                      fit_algebraic, fit_dirichlet, symmetrize, walsh_correction)
from .geometry import Disc, Rect
from .polynomials import AlgebraicPolynomial, DirichletPolynomial
from .regions import (CompactSet, RegionTag, SetParams, ZeroClassification, build_fat_K, build_K,
                      build_Q, classify_zeros, complement_connected, make_params, sample_set)
from .roots import RootRecord, count_zeros, dirichlet_roots_in, poly_roots
from .target import PiecewiseTarget, ToleranceBudget, compute_budget, target_eval, target_is_real_symmetric
from .verify import VerificationReport, verify_P1, verify_P2, verify_P3, verify_P4, verify_P5
from .zeta import (EvalSettings, ZeroTable, find_zero_ordinates, riemann_siegel_theta,
                   riemann_siegel_z, zeta)

__version__ = "0.1.0"
