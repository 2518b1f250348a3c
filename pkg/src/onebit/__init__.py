"""Approximation of bounded power series by power series with +/-1 coefficients."""

from .numerics import EvalResult, PrecisionConfig, eval_constant
from .filters import (FilterSpec, InadmissiblePair, build_filter, l1_norm,
                      min_admissible_sigma)
from .quantizer import (CoefficientOutOfRange, CoefficientStream, QuantizerState,
                        SignAmbiguous, SignSequence, quantize, resume)

__all__ = [
    "EvalResult", "PrecisionConfig", "eval_constant",
    "FilterSpec", "InadmissiblePair", "build_filter", "l1_norm", "min_admissible_sigma",
    "CoefficientOutOfRange", "CoefficientStream", "QuantizerState", "SignAmbiguous",
    "SignSequence", "quantize", "resume",
]
