"""
規範に従う提携の下で実現できる部分プロファイル集合の計算

部分プロファイル F2（A∩B の人数ベクトル）が実現できるのは、
すべての行動部分集合 E について「E の中に合法な行動を持つ人数」が
F2 の E 上の合計以上であるとき（ホールの結婚定理による判定）。
規範に縛られない B\\A の人数分 F1 を加えたものが求める集合になる。

行動部分集合 E は行動 i を第 i-1 ビットとするビットマスクで表す。
"""
import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import FrozenSet, Iterable, Iterator, List, Set, Tuple, Union

import numpy as np

from src.models.coalition import Coalition
from src.models.normative_system import NormativeSystem
from src.models.rcgs_model import Rcgs1Model, StateId
from src.profiles.compositions import composition_count, composition_matrix
from src.profiles.profile import Profile, profile_leq, profile_sum

logger = logging.getLogger(__name__)

__all__ = [
    'LegalRule', 'ProfileSet', 'partial_profiles', 'legal_count', 'hall_condition',
    'compliant_profiles', 'profile_set_size', 'profile_leq', 'profile_sum', 'clear_cache',
]

StateRef = Union[str, StateId, int]
# (行動ビットマスク, 人数) の組を昇順に並べたもの
Signature = Tuple[Tuple[int, int], ...]


class LegalRule(Enum):
    """「E に合法な行動を持つ」の数え方"""
    PROSE = 'prose'      # E \ η(q,x) ≠ ∅
    LITERAL = 'literal'  # η(q,x) ∩ E ≠ ∅（式の字面どおりの読み。検証用）


@dataclass(frozen=True)
class ProfileSet:
    """
    状態 state で、compliance に属するエージェントが規範に従うときに
    提携 coalition が実現できるプロファイルの集合

    matrix は辞書式昇順に並んだ人数行列（書き込み禁止）。
    """
    state: str
    compliance: Coalition
    coalition: Coalition
    matrix: np.ndarray

    def __len__(self) -> int:
        return int(self.matrix.shape[0])

    def __iter__(self) -> Iterator[Profile]:
        owner = len(self.coalition)
        for row in self.matrix.tolist():
            yield Profile(counts=tuple(row), owner_size=owner)

    def __contains__(self, profile: Union[Profile, Iterable[int]]) -> bool:
        counts = profile.counts if isinstance(profile, Profile) else tuple(profile)
        if len(counts) != self.matrix.shape[1]:
            return False
        return bool((self.matrix == np.asarray(counts, dtype=np.int64)).all(axis=1).any())

    def as_set(self) -> Set[Profile]:
        return set(self)

    def to_list(self) -> List[List[int]]:
        """出力用に人数ベクトルのリストにする（辞書式昇順）"""
        return self.matrix.tolist()


def partial_profiles(model: Rcgs1Model, state: StateRef, size: int) -> List[Profile]:
    """
    状態 state で人数 size の提携が取りうる部分プロファイルをすべて返す

    Args:
        model: モデル
        state: 状態
        size: 提携の人数（0..n）

    Returns:
        List[Profile]: 辞書式昇順の部分プロファイル
    """
    if not 0 <= size <= model.agent_count:
        raise ValueError(f"coalition size {size} out of range 0..{model.agent_count}")
    matrix = composition_matrix(model.action_count(state), size)
    return [Profile(counts=tuple(row), owner_size=size) for row in matrix.tolist()]


def profile_set_size(model: Rcgs1Model, state: StateRef, size: int) -> int:
    """部分プロファイルの個数 C(size + m - 1, m - 1)"""
    return composition_count(model.action_count(state), size)


# --- 合法な人数の数え上げ ---

def _agent_mask(model: Rcgs1Model, norm: NormativeSystem, state: str, agent: int,
                rule: LegalRule) -> int:
    """E と交われば数えられる行動のビットマスク"""
    forbidden = 0
    for action in norm.forbidden(state, agent):
        forbidden |= 1 << (action - 1)
    if rule is LegalRule.LITERAL:
        return forbidden
    full = (1 << model.action_count(state)) - 1
    return full & ~forbidden


def _signature(model: Rcgs1Model, norm: NormativeSystem, state: str, agents: Iterable[int],
               rule: LegalRule) -> Signature:
    counter = Counter(_agent_mask(model, norm, state, agent, rule) for agent in agents)
    return tuple(sorted(counter.items()))


def _action_mask(actions: Iterable[int]) -> int:
    mask = 0
    for action in actions:
        mask |= 1 << (action - 1)
    return mask


def legal_count(model: Rcgs1Model, norm: NormativeSystem, state: StateRef, actions: Iterable[int],
                coalition: Iterable[int], rule: LegalRule = LegalRule.PROSE) -> int:
    """
    提携のうち、行動集合 E の中に合法な行動を持つエージェントの人数

    Args:
        model: モデル
        norm: 規範体系
        state: 状態
        actions: 行動部分集合 E（1始まり）
        coalition: 数える対象の提携
        rule: 数え方（既定は E \\ η(q,x) ≠ ∅）

    Returns:
        int: 該当する人数
    """
    name = model.state_id(state).name
    subset = _action_mask(actions)
    return sum(1 for agent in coalition
               if _agent_mask(model, norm, name, agent, rule) & subset)


@lru_cache(maxsize=8)
def _subset_matrix(actions: int) -> np.ndarray:
    """shape (m, 2^m - 1) の 0/1 行列。列 e-1 は空でない部分集合 e の指示ベクトル"""
    subsets = np.arange(1, 1 << actions, dtype=np.int64)
    bits = (subsets[None, :] >> np.arange(actions, dtype=np.int64)[:, None]) & 1
    bits.setflags(write=False)
    return bits


def _subset_capacity(signature: Signature, actions: int, extra: int = 0) -> np.ndarray:
    """各部分集合 E に対する合法人数（+ 規範に縛られない人数 extra）"""
    subsets = np.arange(1, 1 << actions, dtype=np.int64)
    capacity = np.full(subsets.shape, extra, dtype=np.int64)
    for mask, count in signature:
        capacity += np.where(subsets & mask, count, 0)
    return capacity


def _hall_rows(profiles: np.ndarray, capacity: np.ndarray, actions: int) -> np.ndarray:
    """各行がすべての E でホール条件を満たすかのマスク"""
    if profiles.shape[0] == 0 or actions == 0:
        return np.ones(profiles.shape[0], dtype=bool)
    mass = profiles @ _subset_matrix(actions)
    return (mass <= capacity[None, :]).all(axis=1)


def hall_condition(model: Rcgs1Model, norm: NormativeSystem, state: StateRef,
                   profile: Union[Profile, Iterable[int]], coalition: Iterable[int],
                   rule: LegalRule = LegalRule.PROSE) -> bool:
    """
    部分プロファイル F2 が提携の合法な行動だけで実現できるか判定する

    すべての空でない E ⊆ [𝔸(q)] について legal_count(E) ≥ Σ_{i∈E} F2(i) を確かめる。

    Args:
        model: モデル
        norm: 規範体系
        state: 状態
        profile: 提携 coalition の部分プロファイル
        coalition: 規範に従う提携（A∩B）
        rule: 合法人数の数え方

    Returns:
        bool: 条件を満たせば True
    """
    name = model.state_id(state).name
    actions = model.action_count(name)
    counts = profile.counts if isinstance(profile, Profile) else tuple(profile)
    if len(counts) != actions:
        raise ValueError(f"profile {tuple(counts)} has length {len(counts)}, state {name} has {actions} actions")
    signature = _signature(model, norm, name, coalition, rule)
    capacity = _subset_capacity(signature, actions)
    row = np.asarray(counts, dtype=np.int64).reshape(1, actions)
    return bool(_hall_rows(row, capacity, actions)[0])


# --- 規範に従うプロファイル集合 ---

@lru_cache(maxsize=4096)
def _compliant_matrix(actions: int, signature: Signature, free: int, rule: LegalRule) -> np.ndarray:
    """
    規範に従う人数の署名 signature と、規範に縛られない人数 free から
    実現できるプロファイル行列を作る（結果はキャッシュ）
    """
    bound = sum(count for _, count in signature)
    total = bound + free
    if rule is LegalRule.PROSE:
        # 縛られない人はどの E でも数えられるので、B 全体で一度にホール条件を調べれば
        # F1 + F2 の和集合と一致する
        candidates = composition_matrix(actions, total)
        keep = _hall_rows(candidates, _subset_capacity(signature, actions, extra=free), actions)
        matrix = candidates[keep]
    else:
        partial = composition_matrix(actions, bound)
        valid = partial[_hall_rows(partial, _subset_capacity(signature, actions), actions)]
        unbound = composition_matrix(actions, free)
        sums = (valid[:, None, :] + unbound[None, :, :]).reshape(-1, actions)
        matrix = np.unique(sums, axis=0) if sums.shape[0] else sums
    matrix = np.ascontiguousarray(matrix, dtype=np.int64)
    matrix.setflags(write=False)
    logger.debug(f"プロファイル集合を計算しました: 行動数 {actions}, 規範対象 {bound} 人, "
                 f"対象外 {free} 人 → {matrix.shape[0]} 件")
    return matrix


def compliant_profiles(model: Rcgs1Model, norm: NormativeSystem, compliance: Iterable[int],
                       state: StateRef, coalition: Iterable[int],
                       rule: LegalRule = LegalRule.PROSE) -> ProfileSet:
    """
    compliance の規範遵守の下で提携 coalition が状態 state で実現できるプロファイル集合

    { F1 + F2 : F1 は B\\A の部分プロファイル, F2 は A∩B のホール条件を満たす部分プロファイル }

    Args:
        model: モデル
        norm: 規範体系
        compliance: 規範に従う提携 A
        state: 状態
        coalition: 行動する提携 B
        rule: 合法人数の数え方

    Returns:
        ProfileSet: 辞書式昇順のプロファイル集合
    """
    name = model.state_id(state).name
    compliance = frozenset(compliance)
    coalition = frozenset(coalition)
    bound = coalition & compliance
    signature = _signature(model, norm, name, bound, rule)
    matrix = _compliant_matrix(model.action_count(name), signature, len(coalition - compliance), rule)
    return ProfileSet(state=name, compliance=compliance, coalition=coalition, matrix=matrix)


def clear_cache() -> None:
    """プロファイル集合のキャッシュを消去する"""
    _compliant_matrix.cache_clear()
