"""Weighted Groebner bases with trace statistics, plus a TD3 agent that
learns monomial-order weight vectors against a GrevLex baseline."""

from .bench import BENCHMARK_NAMES, load_benchmark, random_support
from .evaluation import WinTieLoss, calibrate, ecdf, sweep, test_order
from .f4 import (
    GroebnerResult,
    TraceStats,
    buchberger_reference,
    f4_groebner,
    is_groebner_basis,
)
from .field import DEFAULT_MODULUS, ff_inv
from .orders import (
    GREVLEX,
    GRLEX,
    LEX,
    GrevLex,
    GrLex,
    Lex,
    MonomialOrder,
    WeightedOrder,
    parse_order,
)
from .poly import Ideal, Polynomial, normal_form, s_polynomial
from .reward import (
    EnvConfig,
    SupportSet,
    WeightEnv,
    discretize,
    mc_reward,
    project_simplex,
    relative_reward,
    sample_ideal,
    trace_reward,
)
from .td3 import PerBuffer, Td3Agent, Td3Config, act, train

__version__ = "0.1.0"
