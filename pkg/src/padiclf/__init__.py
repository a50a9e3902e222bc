"""padiclf: p-adic linear forms in logarithms, audited at desk scale."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .padic import INF, PadicNumber, exp_p, hensel_lift, log_p, valuation  # noqa: F401
from .series import PadicSeries, count_zeros, gauss_norm, newton_polygon, schwarz_bound  # noqa: F401
from .numfield import (  # noqa: F401
    QQ_FIELD,
    AlgebraicNumber,
    HeightValue,
    NumberField,
    height,
    heights_vector,
    product_formula_check,
    siegel_solve,
)
from .groups import exp_series, make_gm_power, model_from_preset  # noqa: F401
from .pipeline import (  # noqa: F401
    Parameters,
    ProofInstance,
    choose_parameters,
    construct_auxiliary,
    nu_reduction,
    run_pipeline,
    theorem_bound,
    verify_gm,
)
