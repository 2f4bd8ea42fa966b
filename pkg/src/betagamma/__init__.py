"""Tail probabilities of B * Z for B ~ Beta(a, b) and Z ~ GGa(c, p), in log space."""
from .asymptotics import (
    ApproxChainReport,
    bound_12,
    bound_23,
    bound_34,
    chain_evaluate,
    check_elementary_inequalities,
    log_tail_claim1,
)
from .distributions import (
    BetaParams,
    GammaParams,
    GGaParams,
    RngState,
    beta_log_pdf,
    gamma_log_pdf,
    gga_log_pdf,
    gga_log_tail,
    sample_beta,
    sample_gamma,
    sample_gamma_overshoot,
    sample_gga,
)
from .exact_tail import TailQuery, log_conditional_tail, log_tail_exact
from .montecarlo import McConfig, McEstimate, mc_conditional, mc_naive
from .quadrature import QuadConfig
from .specfun import (
    ConvergenceError,
    LogProb,
    LogReal,
    log_beta,
    log_gamma,
    log_reg_beta_upper,
    log_reg_gamma_upper,
)

__all__ = [name for name in dir() if not name.startswith("_")]
