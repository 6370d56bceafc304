"""Toeplitz matrices from symbols: closed-form band inverses, off-diagonal
decay, secular eigenvalue location and predictor polynomials."""

__version__ = "0.1.0"

from .errors import (ToeplitzSpectraError, SymbolError, ConfigError, SingularMatrixError,
                     NotHermitianError, BreakdownError, ConvergenceError, BoundaryRootError,
                     UnbalancedSplitError, MultipleRootError, SingularCorrectionError,
                     ExcludedLevelError, ApproximationError, MarginError)
from .symbols import (Symbol, TrigPoly, SmoothSymbol, ChebForm, fourier_coefficients, evaluate,
                      to_cheb_form, from_inside_roots, builtin, symbol_from_json)
from .toeplitz_core import (ToeplitzMatrix, PredictorPolynomial, build, dense_inverse,
                            hermitian_eigenvalues, levinson_predictor, verify_predictor_moments)
from .polyroots import RootSet, k_polynomial, find_roots, classify_unit_circle
from .factorization import (WienerHopfFactorization, wiener_hopf_split, factorize,
                            partial_fractions, tau, phi_km)
from .band_inverse import (HankelBlock, DecayReport, BandInverse, invert_band, t1_entry,
                           t2_entry, decay_certificate, hankel_norm_scan, hankel_block)
from .secular_eigen import (SecularSystem, EigenLocalizationReport, chi_of_lambda,
                            secular_determinant, locate_eigenvalues, localize, weyl_statistic)
from .regular_symbol import (RegularApproximation, approx_by_square_modulus,
                             neumann_decay_report)
