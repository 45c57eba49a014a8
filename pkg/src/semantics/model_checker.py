"""
NCHATL のモデル検査エンジン

部分式ごとに成り立つ状態の集合を下から計算する。
⟨⟨B⟩⟩X は一手の強制判定（enforce）、⟨⟨B⟩⟩G は最大不動点、
⟨⟨B⟩⟩U は最小不動点、[C] は規範に従う提携を C に置き換えて評価する。
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, Iterator, List, Tuple, Union

import numpy as np

from src.formula.ast import (And, Comply, Formula, Globally, Next, Not, Or, Prop, Top, Until,
                             agents, propositions)
from src.models.coalition import EMPTY_COALITION, Coalition, check_coalition, complement
from src.models.errors import FormulaReferenceError
from src.models.normative_system import NormativeSystem
from src.models.rcgs_model import Rcgs1Model, StateId
from src.profiles.profile_sets import LegalRule, compliant_profiles

logger = logging.getLogger(__name__)

DEFAULT_CHUNK_SIZE = 1_000_000

StateRef = Union[str, StateId, int]


@dataclass(frozen=True)
class CheckContext:
    """検査の文脈（モデル・規範体系・規範に従う提携 A）"""
    model: Rcgs1Model
    norm: NormativeSystem
    compliance: Coalition = EMPTY_COALITION
    legal_rule: LegalRule = LegalRule.PROSE
    chunk_size: int = DEFAULT_CHUNK_SIZE

    def with_compliance(self, compliance: Iterable[int]) -> 'CheckContext':
        return replace(self, compliance=frozenset(compliance))


@dataclass(frozen=True)
class StateSet:
    """状態名の集合（出力は名前の昇順）"""
    members: FrozenSet[str] = field(default_factory=frozenset)

    def __contains__(self, state: object) -> bool:
        return str(state) in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.members))

    def to_list(self) -> List[str]:
        return sorted(self.members)


class NchatlModelChecker:
    """一つのモデルと規範体系に対する検査器（部分式の結果をキャッシュする）"""

    def __init__(self, model: Rcgs1Model, norm: NormativeSystem,
                 legal_rule: LegalRule = LegalRule.PROSE, chunk_size: int = DEFAULT_CHUNK_SIZE):
        self.logger = logging.getLogger(__name__)
        self.model = model
        self.norm = norm
        self.legal_rule = legal_rule
        self.chunk_size = max(1, int(chunk_size))
        self._extensions: Dict[Tuple[Formula, Coalition], np.ndarray] = {}

    @classmethod
    def from_context(cls, ctx: CheckContext) -> 'NchatlModelChecker':
        return cls(ctx.model, ctx.norm, ctx.legal_rule, ctx.chunk_size)

    # --- 入力の確認 ---

    def check_references(self, formula: Formula, compliance: Iterable[int] = ()) -> None:
        """
        式の命題と提携、規範に従う提携がモデルの範囲内か確認する

        Raises:
            FormulaReferenceError: 未知の命題または範囲外のエージェント
        """
        unknown = sorted(propositions(formula) - self.model.propositions)
        if unknown:
            raise FormulaReferenceError(f"unknown proposition {unknown[0]!r}")
        check_coalition(agents(formula), self.model.agent_count)
        check_coalition(compliance, self.model.agent_count)

    # --- 一手の強制 ---

    def _mask(self, states: Union['StateSet', Iterable[StateRef]]) -> np.ndarray:
        mask = np.zeros(self.model.state_count, dtype=bool)
        for state in states:
            mask[self.model.state_id(state).index] = True
        return mask

    def enforce_mask(self, state: StateRef, coalition: Coalition, compliance: Coalition,
                     target: np.ndarray) -> bool:
        """
        提携 coalition が状態 state で次の状態を target に強制できるか

        coalition のある規範適合プロファイルについて、残りのエージェントの
        どの規範適合プロファイルと合わせても遷移先が target に入れば True。
        """
        if target.all():
            return True
        if not target.any():
            return False
        sid = self.model.state_id(state)
        own = compliant_profiles(self.model, self.norm, compliance, sid, coalition, self.legal_rule).matrix
        rest = complement(coalition, self.model.agent_count)
        adversary = compliant_profiles(self.model, self.norm, compliance, sid, rest, self.legal_rule).matrix
        # 遷移先 -1（未解決）は末尾の False に当たる
        allowed = np.append(target, False)
        rows_per_chunk = max(1, self.chunk_size // max(1, adversary.shape[0]))
        actions = own.shape[1]
        for start in range(0, own.shape[0], rows_per_chunk):
            block = own[start:start + rows_per_chunk]
            full = (block[:, None, :] + adversary[None, :, :]).reshape(-1, actions)
            targets = self.model.successor_indices(sid, full).reshape(block.shape[0], adversary.shape[0])
            if allowed[targets].all(axis=1).any():
                return True
        return False

    def _pre(self, coalition: Coalition, compliance: Coalition, target: np.ndarray) -> np.ndarray:
        """target に一手で強制できる状態のマスク"""
        return np.array([self.enforce_mask(i, coalition, compliance, target)
                         for i in range(self.model.state_count)], dtype=bool)

    # --- 再帰的な評価 ---

    def extension(self, formula: Formula, compliance: Coalition) -> np.ndarray:
        """式が成り立つ状態のマスク（読み取り専用）"""
        key = (formula, compliance)
        cached = self._extensions.get(key)
        if cached is not None:
            return cached
        result = self._evaluate(formula, compliance)
        result.setflags(write=False)
        self._extensions[key] = result
        return result

    def _evaluate(self, formula: Formula, compliance: Coalition) -> np.ndarray:
        model = self.model
        if isinstance(formula, Top):
            return np.ones(model.state_count, dtype=bool)
        if isinstance(formula, Prop):
            return model.states_labeled(formula.name)
        if isinstance(formula, Not):
            return ~self.extension(formula.operand, compliance)
        if isinstance(formula, Or):
            return self.extension(formula.left, compliance) | self.extension(formula.right, compliance)
        if isinstance(formula, And):
            return self.extension(formula.left, compliance) & self.extension(formula.right, compliance)
        if isinstance(formula, Next):
            return self._pre(formula.coalition, compliance, self.extension(formula.operand, compliance))
        if isinstance(formula, Globally):
            return self._greatest_fixpoint(formula, compliance)
        if isinstance(formula, Until):
            return self._least_fixpoint(formula, compliance)
        if isinstance(formula, Comply):
            return self.extension(formula.operand, formula.coalition).copy()
        raise TypeError(f"unknown formula node: {formula!r}")

    def _greatest_fixpoint(self, formula: Globally, compliance: Coalition) -> np.ndarray:
        invariant = self.extension(formula.operand, compliance)
        current = invariant.copy()
        iteration = 0
        while True:
            iteration += 1
            shrunk = invariant & self._pre(formula.coalition, compliance, current)
            if np.array_equal(shrunk, current):
                self.logger.debug(f"G の不動点に {iteration} 回で到達しました（{int(current.sum())} 状態）")
                return current
            current = shrunk

    def _least_fixpoint(self, formula: Until, compliance: Coalition) -> np.ndarray:
        hold = self.extension(formula.left, compliance)
        current = self.extension(formula.right, compliance).copy()
        iteration = 0
        while True:
            iteration += 1
            grown = current | (hold & self._pre(formula.coalition, compliance, current))
            if np.array_equal(grown, current):
                self.logger.debug(f"U の不動点に {iteration} 回で到達しました（{int(current.sum())} 状態）")
                return current
            current = grown

    # --- 公開インターフェース ---

    def mcheck(self, formula: Formula, compliance: Iterable[int] = EMPTY_COALITION) -> StateSet:
        """
        規範に従う提携 compliance の下で式が成り立つ状態の集合を返す

        Raises:
            FormulaReferenceError: 未知の命題または範囲外のエージェント
        """
        compliance = frozenset(compliance)
        self.check_references(formula, compliance)
        mask = self.extension(formula, compliance)
        names = self.model.state_names
        return StateSet(frozenset(names[i] for i in np.flatnonzero(mask)))

    def check_at(self, state: StateRef, formula: Formula,
                 compliance: Iterable[int] = EMPTY_COALITION) -> bool:
        """
        状態 state で式が成り立つか判定する

        Raises:
            FormulaReferenceError: 未知の状態・命題、範囲外のエージェント
        """
        sid = self.model.state_id(state)
        return sid.name in self.mcheck(formula, compliance)

    def enforce(self, state: StateRef, coalition: Iterable[int], target: Union[StateSet, Iterable[StateRef]],
                compliance: Iterable[int] = EMPTY_COALITION) -> bool:
        coalition = check_coalition(coalition, self.model.agent_count)
        compliance = check_coalition(compliance, self.model.agent_count)
        return self.enforce_mask(state, coalition, compliance, self._mask(target))


def enforce(ctx: CheckContext, state: StateRef, coalition: Iterable[int],
            target: Union[StateSet, Iterable[StateRef]]) -> bool:
    """文脈 ctx で提携 coalition が次の状態を target に強制できるか"""
    return NchatlModelChecker.from_context(ctx).enforce(state, coalition, target, ctx.compliance)


def mcheck(ctx: CheckContext, formula: Formula) -> StateSet:
    """文脈 ctx で式が成り立つ状態の集合"""
    return NchatlModelChecker.from_context(ctx).mcheck(formula, ctx.compliance)


def check_at(ctx: CheckContext, state: StateRef, formula: Formula) -> bool:
    """文脈 ctx の状態 state で式が成り立つか"""
    return NchatlModelChecker.from_context(ctx).check_at(state, formula, ctx.compliance)
