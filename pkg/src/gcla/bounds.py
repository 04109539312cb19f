"""Size constants measured on this package's constructions and frozen.

Tests and ``gcla verify`` assert these; they must never be loosened.
"""

import math

CHAR_VECTOR_C = 3  # size(char_vector(X, U)) <= c max(|X|, 1) ceil(log2(U+1)) + c
IP3_C = 4  # each reduce_3sum_to_ip vector <= c m ceil(log2(U+1))
MV_ROW_C = 6  # each reduce_3sum_to_mv row (and v) <= c s ceil(log2(U+1))
MM_STRONG_C = 3  # strong grammars of reduce_mm <= c ceil(log2 N)^2
MM_RLE_C = 2  # rows of A / columns of B have <= c log2 N runs
SELFRED_C = 9  # self_reduce emits <= c ceil(m/s)^2 subproblems


def floor_log2(x: int) -> int:
    return x.bit_length() - 1


def repeat_overhead_bound(alpha: int) -> int:
    return 2 * floor_log2(alpha) + 2


def zeros_size_bound(k: int) -> int:
    return 2 * floor_log2(k) + 2


def log_universe(U: int) -> int:
    return math.ceil(math.log2(U + 1))


def char_vector_bound(n_elements: int, U: int) -> int:
    # the empty set still needs the O(log U) rules of 0^U
    return CHAR_VECTOR_C * max(n_elements, 1) * log_universe(U) + CHAR_VECTOR_C


def ip3_bound(m: int, U: int) -> int:
    return IP3_C * m * log_universe(U)


def mv_row_bound(s: int, U: int) -> int:
    return MV_ROW_C * s * log_universe(U)


def mm_strong_bound(N: int) -> int:
    return MM_STRONG_C * math.ceil(math.log2(N)) ** 2


def mm_rle_bound(N: int) -> float:
    return MM_RLE_C * math.log2(N)


def selfred_bound(m: int, s: int) -> int:
    return SELFRED_C * (-(-m // s)) ** 2
