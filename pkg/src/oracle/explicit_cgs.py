"""
1-RCGS を明示的な並行ゲーム構造（各エージェントの行動の組ごとの遷移表）に展開する

小さなモデルでの照合用。遷移表の大きさは Σ_q 𝔸(q)^n なので予算で制限する。
"""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Any, Dict, FrozenSet, Iterator, List, Mapping, Tuple

import numpy as np

from src.models.errors import BudgetExceededError, ModelFormatError
from src.models.rcgs_model import Rcgs1Model, StateSpec, TransitionSpec

logger = logging.getLogger(__name__)

DEFAULT_EXPAND_BUDGET = 1_000_000

ActionTuple = Tuple[int, ...]


@dataclass(frozen=True)
class ExplicitCgs:
    """
    展開された並行ゲーム構造

    transitions[q][(α1, ..., αn)] が遷移先。行動数は状態ごとに全員共通。
    """
    agent_count: int
    states: Tuple[str, ...]
    propositions: FrozenSet[str]
    labels: Mapping[str, FrozenSet[str]]
    actions: Mapping[str, int]
    transitions: Mapping[str, Mapping[ActionTuple, str]]

    @property
    def transition_count(self) -> int:
        return sum(len(table) for table in self.transitions.values())

    def action_tuples(self, state: str) -> Iterator[ActionTuple]:
        return product(range(1, self.actions[state] + 1), repeat=self.agent_count)

    def successor(self, state: str, choice: ActionTuple) -> str:
        return self.transitions[state][tuple(choice)]


def expansion_size(model: Rcgs1Model) -> int:
    """展開後の遷移表の行数 Σ_q 𝔸(q)^n"""
    return sum(spec.actions ** model.agent_count for spec in model.states)


def expand(model: Rcgs1Model, budget: int = DEFAULT_EXPAND_BUDGET) -> ExplicitCgs:
    """
    モデルを明示的な並行ゲーム構造に展開する

    行動の組の遷移先は、その組の人数ベクトルに対するモデルの遷移先とする。

    Args:
        model: 検証済みのモデル
        budget: 遷移表の行数の上限

    Returns:
        ExplicitCgs: 展開結果

    Raises:
        BudgetExceededError: 遷移表が予算を超える場合
    """
    required = expansion_size(model)
    if required > budget:
        logger.warning(f"展開を中止しました: 必要な遷移数 {required} が予算 {budget} を超えています")
        raise BudgetExceededError('expansion', required, budget)

    n = model.agent_count
    names = model.state_names
    transitions: Dict[str, Dict[ActionTuple, str]] = {}
    for spec in model.states:
        choices = np.array(list(product(range(1, spec.actions + 1), repeat=n)), dtype=np.int64)
        choices = choices.reshape(-1, n)
        counts = np.stack([(choices == a).sum(axis=1) for a in range(1, spec.actions + 1)], axis=1)
        targets = model.successor_indices(spec.name, counts)
        transitions[spec.name] = {tuple(row): names[t] for row, t in zip(choices.tolist(), targets.tolist())}

    cgs = ExplicitCgs(
        agent_count=n,
        states=tuple(names),
        propositions=model.propositions,
        labels={spec.name: spec.label for spec in model.states},
        actions={spec.name: spec.actions for spec in model.states},
        transitions=transitions,
    )
    logger.debug(f"モデルを展開しました: {cgs.transition_count} 遷移")
    return cgs


def check_anonymity(cgs: ExplicitCgs, rng: np.random.Generator,
                    samples: int = 100) -> List[Tuple[str, ActionTuple, int, int]]:
    """
    無作為に選んだ (状態, 行動の組, 入れ替える二人) で遷移が入れ替えに不変か調べる

    Returns:
        不変でなかった (状態, 行動の組, i, j) のリスト（空なら匿名）
    """
    failures = []
    n = cgs.agent_count
    if n < 2:
        return failures
    for _ in range(samples):
        state = cgs.states[int(rng.integers(len(cgs.states)))]
        choice = tuple(int(a) for a in rng.integers(1, cgs.actions[state] + 1, size=n))
        i, j = (int(x) for x in rng.choice(n, size=2, replace=False))
        swapped = list(choice)
        swapped[i], swapped[j] = swapped[j], swapped[i]
        if cgs.successor(state, choice) != cgs.successor(state, tuple(swapped)):
            failures.append((state, choice, i + 1, j + 1))
    return failures


def compress(cgs: ExplicitCgs) -> Rcgs1Model:
    """
    匿名な明示的構造を表形式の 1-RCGS に戻す

    Raises:
        ModelFormatError: 同じ人数ベクトルの組が異なる遷移先を持つ（匿名でない）場合
    """
    states = []
    for state in cgs.states:
        m = cgs.actions[state]
        rows: Dict[Tuple[int, ...], str] = {}
        for choice, target in cgs.transitions[state].items():
            counts = tuple(choice.count(a) for a in range(1, m + 1))
            known = rows.setdefault(counts, target)
            if known != target:
                raise ModelFormatError(
                    f"transitions at {state} are not anonymous: profile {counts} leads to {known} and {target}",
                    'compress')
        states.append(StateSpec(name=state, label=cgs.labels[state], actions=m,
                                transitions=TransitionSpec(table=tuple(sorted(rows.items())))))
    return Rcgs1Model(agent_count=cgs.agent_count, propositions=cgs.propositions, states=tuple(states))


def explicit_to_dict(cgs: ExplicitCgs) -> Dict[str, Any]:
    """展開結果を確認用の文書（辞書）にする"""
    return {
        'agents': cgs.agent_count,
        'propositions': sorted(cgs.propositions),
        'states': [
            {
                'id': state,
                'label': sorted(cgs.labels[state]),
                'actions': cgs.actions[state],
                'transitions': [{'actions': list(choice), 'to': target}
                                for choice, target in sorted(cgs.transitions[state].items())],
            }
            for state in cgs.states
        ],
    }
