"""High-precision upper and lower bounds for multilinear Bohnenblust-Hille constants."""

__version__ = "0.1.0"

from .numerics import DEFAULT_DIGITS, Field, HighPrecReal, euler_gamma, gamma  # noqa: E402
from .khinchine import a_complex, a_real, p_zero  # noqa: E402
from .recursive import ConstantTable, Strategy, c_recursive, j_sequence, m_sequence  # noqa: E402

__all__ = [
    "DEFAULT_DIGITS",
    "ConstantTable",
    "Field",
    "HighPrecReal",
    "Strategy",
    "a_complex",
    "a_real",
    "c_recursive",
    "euler_gamma",
    "gamma",
    "j_sequence",
    "m_sequence",
    "p_zero",
]
