"""Kernel machines with a Gaussian-process view.

The library fits kernel ridge models and minimum-norm interpolants, shows
them to be conditional means of a centered Gaussian process with the same
kernel, and evaluates the Gaussian Radon transform of path functionals
(suprema, threshold exceedances, averages) on finite-dimensional marginals
by closed form where available and reproducible Monte Carlo otherwise.
"""

from .errors import (
    ConvergenceError,
    NotPsdError,
    NumericsError,
    SingularMatrixError,
    ValidationError,
)
from .gauss import (
    ConditionalGaussian,
    JointGaussian,
    condition,
    noise_augmented_joint,
    posterior_mean,
    prior_marginal,
    ridge_via_conditioning,
    sample,
)
from .kernels import (
    RBF,
    BrownianMin,
    CustomKernel,
    GramMatrix,
    Linear,
    eval_kernel,
    feature_distance_sq,
    gram,
    kernel_from_spec,
    kernel_to_spec,
)
from .linalg import EigenDecomp, SpdMatrix, cholesky_solve, psd_factor, spd_function, sym_eigen
from .radon import (
    AffineConditioning,
    FunctionalSpec,
    McEstimate,
    grt_linear,
    grt_mc,
    predicted_sup_vs_sup_of_predictions,
)
from .regress import (
    Dataset,
    RidgeModel,
    fitted_norm_sq_closed_form,
    load_model,
    min_objective_closed_form,
    model_from_dict,
    model_to_dict,
    objective,
    predict,
    ridge_fit,
    rkhs_norm_sq,
    save_model,
    spline_fit,
)
from .wiener import (
    PiecewiseLinearPath,
    TailMassReport,
    bm_section,
    cameron_martin_norm_sq,
    cm_inner,
    sample_bm_paths,
    tail_mass,
)

__version__ = "0.1.0"
