"""
総当たりによる照合用の実装

高速な経路（ホール条件・プロファイル和）とはコードを共有せず、
各エージェントの行動の組を直接数え上げて定義どおりに評価する。
"""
import logging
from collections import Counter
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Set, Tuple, Union

import networkx as nx

from src.formula.ast import And, Comply, Formula, Globally, Next, Not, Or, Prop, Top, Until, propositions
from src.models.coalition import Coalition, grand_coalition
from src.models.errors import BudgetExceededError, FormulaReferenceError
from src.models.normative_system import NormativeSystem, restrict_norm
from src.models.rcgs_model import Rcgs1Model
from src.oracle.explicit_cgs import DEFAULT_EXPAND_BUDGET, ExplicitCgs, expand
from src.profiles.profile import Profile
from src.semantics.model_checker import CheckContext, StateSet

logger = logging.getLogger(__name__)


def _choices(model: Rcgs1Model, norm: NormativeSystem, compliance: Coalition,
             state: str, coalition: Iterable[int]) -> List[List[int]]:
    """提携の各メンバーが選べる行動（compliance のメンバーは合法な行動のみ）"""
    bound = restrict_norm(norm, compliance)
    return [sorted(bound.legal_actions(model, state, agent)) for agent in sorted(coalition)]


def brute_compliant_profiles(model: Rcgs1Model, norm: NormativeSystem, compliance: Iterable[int],
                             state: str, coalition: Iterable[int],
                             budget: int = DEFAULT_EXPAND_BUDGET) -> Set[Profile]:
    """
    規範に従う行動の組をすべて列挙し、人数ベクトルに射影した集合を返す

    Raises:
        BudgetExceededError: 𝔸(q)^|B| が予算を超える場合
    """
    name = model.state_id(state).name
    m = model.action_count(name)
    coalition = frozenset(coalition)
    required = m ** len(coalition)
    if required > budget:
        raise BudgetExceededError('brute-force profile enumeration', required, budget)
    result: Set[Profile] = set()
    for choice in product(*_choices(model, norm, frozenset(compliance), name, coalition)):
        tally = Counter(choice)
        result.add(Profile(counts=tuple(tally[a] for a in range(1, m + 1)), owner_size=len(coalition)))
    return result


def matching_check(model: Rcgs1Model, norm: NormativeSystem, state: str,
                   profile: Union[Profile, Iterable[int]], coalition: Iterable[int]) -> bool:
    """
    エージェントと行動の枠（行動 i を F2(i) 個）の二部グラフで、
    すべての枠を埋める最大マッチングがあるか調べる

    辺はエージェント x に行動 i が禁止されていないときに張る。
    """
    name = model.state_id(state).name
    counts = profile.counts if isinstance(profile, Profile) else tuple(profile)
    members = sorted(frozenset(coalition))
    if sum(counts) != len(members):
        raise ValueError(f"profile {tuple(counts)} does not sum to coalition size {len(members)}")
    slots = [('slot', action, copy) for action, count in enumerate(counts, start=1) for copy in range(count)]
    if not slots:
        return True
    graph = nx.Graph()
    agents = [('agent', x) for x in members]
    graph.add_nodes_from(agents, bipartite=0)
    graph.add_nodes_from(slots, bipartite=1)
    for x in members:
        forbidden = norm.forbidden(name, x)
        graph.add_edges_from((('agent', x), slot) for slot in slots if slot[1] not in forbidden)
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=agents)
    return all(slot in matching for slot in slots)


class NaiveEvaluator:
    """明示的な構造の上で、行動の組を量化して式を評価する"""

    def __init__(self, model: Rcgs1Model, norm: NormativeSystem, budget: int = DEFAULT_EXPAND_BUDGET):
        self.logger = logging.getLogger(__name__)
        self.model = model
        self.norm = norm
        self.cgs: ExplicitCgs = expand(model, budget)
        self._cache: Dict[Tuple[Formula, Coalition], FrozenSet[str]] = {}
        self.logger.debug(f"総当たり評価の準備ができました（遷移数 {self.cgs.transition_count}）")

    def _joint(self, coalition: Coalition, own: Tuple[int, ...],
               other: Tuple[int, ...], rest: Coalition) -> Tuple[int, ...]:
        choice = dict(zip(sorted(coalition), own))
        choice.update(zip(sorted(rest), other))
        return tuple(choice[a] for a in range(1, self.cgs.agent_count + 1))

    def can_force(self, state: str, coalition: Coalition, compliance: Coalition, target: FrozenSet[str]) -> bool:
        """ある規範適合な行動の組で、残りのどの規範適合な行動の組に対しても target に入るか"""
        rest = grand_coalition(self.cgs.agent_count) - coalition
        own_choices = list(product(*_choices(self.model, self.norm, compliance, state, coalition)))
        other_choices = list(product(*_choices(self.model, self.norm, compliance, state, rest)))
        return any(
            all(self.cgs.successor(state, self._joint(coalition, own, other, rest)) in target
                for other in other_choices)
            for own in own_choices)

    def _pre(self, coalition: Coalition, compliance: Coalition, target: FrozenSet[str]) -> FrozenSet[str]:
        return frozenset(q for q in self.cgs.states if self.can_force(q, coalition, compliance, target))

    def evaluate(self, formula: Formula, compliance: Coalition) -> FrozenSet[str]:
        key = (formula, compliance)
        if key not in self._cache:
            self._cache[key] = self._evaluate(formula, compliance)
        return self._cache[key]

    def _evaluate(self, formula: Formula, compliance: Coalition) -> FrozenSet[str]:
        everything = frozenset(self.cgs.states)
        if isinstance(formula, Top):
            return everything
        if isinstance(formula, Prop):
            return frozenset(q for q in self.cgs.states if formula.name in self.cgs.labels[q])
        if isinstance(formula, Not):
            return everything - self.evaluate(formula.operand, compliance)
        if isinstance(formula, Or):
            return self.evaluate(formula.left, compliance) | self.evaluate(formula.right, compliance)
        if isinstance(formula, And):
            # ¬(¬a ∨ ¬b)
            left = everything - self.evaluate(formula.left, compliance)
            right = everything - self.evaluate(formula.right, compliance)
            return everything - (left | right)
        if isinstance(formula, Next):
            return self._pre(formula.coalition, compliance, self.evaluate(formula.operand, compliance))
        if isinstance(formula, Globally):
            # 全状態から下がっていく反復
            hold = self.evaluate(formula.operand, compliance)
            current = everything
            while True:
                following = hold & self._pre(formula.coalition, compliance, current)
                if following == current:
                    return current
                current = following
        if isinstance(formula, Until):
            # 空集合から上がっていく反復
            goal = self.evaluate(formula.right, compliance)
            hold = self.evaluate(formula.left, compliance)
            current: FrozenSet[str] = frozenset()
            while True:
                following = goal | (hold & self._pre(formula.coalition, compliance, current))
                if following == current:
                    return current
                current = following
        if isinstance(formula, Comply):
            return self.evaluate(formula.operand, formula.coalition)
        raise TypeError(f"unknown formula node: {formula!r}")


def naive_mcheck(ctx: CheckContext, formula: Formula, budget: int = DEFAULT_EXPAND_BUDGET) -> StateSet:
    """
    総当たりで式が成り立つ状態の集合を求める

    Raises:
        FormulaReferenceError: 未知の命題
        BudgetExceededError: 展開が予算を超える場合
    """
    unknown = sorted(propositions(formula) - ctx.model.propositions)
    if unknown:
        raise FormulaReferenceError(f"unknown proposition {unknown[0]!r}")
    evaluator = NaiveEvaluator(ctx.model, ctx.norm, budget)
    return StateSet(evaluator.evaluate(formula, frozenset(ctx.compliance)))
