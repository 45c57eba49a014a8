"""
弱合成（非負整数ベクトルで和が一定のもの）の列挙
"""
from functools import lru_cache
from math import comb

import numpy as np


def composition_count(parts: int, total: int) -> int:
    """長さ parts・和 total の弱合成の個数 C(total + parts - 1, parts - 1)"""
    if parts <= 0:
        return 1 if total == 0 else 0
    return comb(total + parts - 1, parts - 1)


def _build(parts: int, total: int) -> np.ndarray:
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    if parts == 2:
        first = np.arange(total + 1, dtype=np.int64)
        return np.column_stack((first, total - first))
    blocks = []
    for first in range(total + 1):
        rest = _build(parts - 1, total - first)
        block = np.empty((rest.shape[0], parts), dtype=np.int64)
        block[:, 0] = first
        block[:, 1:] = rest
        blocks.append(block)
    return np.vstack(blocks)


@lru_cache(maxsize=64)
def composition_matrix(parts: int, total: int) -> np.ndarray:
    """
    長さ parts・和 total の弱合成をすべて行に並べた行列を返す

    行は辞書式昇順。結果はキャッシュされるので書き込み禁止にしてある。

    Args:
        parts: ベクトルの長さ（行動数）
        total: 成分の和（提携の人数）

    Returns:
        np.ndarray: shape (C(total + parts - 1, parts - 1), parts)
    """
    if total < 0:
        raise ValueError(f"total must be non-negative: {total}")
    if parts <= 0:
        matrix = np.zeros((1 if total == 0 else 0, 0), dtype=np.int64)
    else:
        matrix = _build(parts, total)
    matrix.setflags(write=False)
    return matrix
