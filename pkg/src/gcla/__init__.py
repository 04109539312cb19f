"""Grammar-compressed linear algebra: straight-line programs, run-length
encodings, exact compressed inner products, and generators for the hard
instances of compressed inner product, matrix-vector and matrix-matrix
multiplication."""

from .config import RunConfig, SelfReductionConfig
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    ElementOutOfUniverse,
    GclaError,
    InvalidForm,
    InvalidInstance,
    InvalidSymbol,
    LengthOverflow,
    MixedTargets,
)
from .instances import SumInstance
from .linalg import (
    CompressedMatrix,
    CompressedVector,
    dense_mat_mul,
    inner_product,
    mat_vec,
    squared_l2_distance,
)
from .rle import RleSeq, rle_decode, rle_encode, rle_inner_product, slp_to_rle
from .slp import (
    GrammarBuilder,
    Slp,
    char_vector,
    concat,
    expand,
    from_bits,
    ones,
    pad_with_zeros,
    repeat,
    run_stream,
    terminal,
    zeros,
)

__version__ = "0.1.0"
