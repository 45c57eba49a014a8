"""
二つのタスクの協調問題をエージェント数 n に合わせて生成するモジュール

行動 1 はタスク p1 への貢献、行動 2 はタスク p2 への貢献。
p1 は 80〜90% が行動 1 を選んだとき、p2 は 20〜60% が行動 2 を
選んだときに次の状態で成り立つ。
"""
from dataclasses import dataclass
from typing import FrozenSet, List, Tuple

from src.models.coalition import EMPTY_COALITION
from src.models.normative_system import NormativeSystem
from src.models.rcgs_model import Guard, GuardedRule, Rcgs1Model, StateSpec, TransitionSpec

START_STATE = 'q0'
BOTH_STATE = 'q_80_20'


@dataclass(frozen=True)
class CoordinationScenario:
    """協調問題の例題一件（規範・式・期待される判定）"""
    label: str
    norm: NormativeSystem
    formula: str
    compliance: FrozenSet[int]
    expected: bool


def _check_size(n: int) -> int:
    if n < 10 or n % 10:
        raise ValueError(f"agent count must be a positive multiple of 10, got {n}")
    return n // 10


def _sink(name: str, label: FrozenSet[str]) -> StateSpec:
    return StateSpec(name=name, label=label, actions=1, transitions=TransitionSpec(rules=(), default=name))


def _band(low: int, high: int, target: str) -> GuardedRule:
    return GuardedRule(guards=(Guard(action=1, min_count=low, max_count=high),), target=target)


def _bands(n: int) -> List[Tuple[int, int, str]]:
    """行動 1 の人数帯と遷移先（空の帯は除く。先に並んだ帯が優先）"""
    p1 = ((8 * n + 9) // 10, 9 * n // 10)
    # p2 は行動 2 が 20〜60% のとき。行動 1 の人数に直す
    p2 = (n - 6 * n // 10, n - (2 * n + 9) // 10)
    both = (max(p1[0], p2[0]), min(p1[1], p2[1]))
    bands = [(both[0], both[1], BOTH_STATE), (p1[0], p1[1], 'q_p1'), (p2[0], p2[1], 'q_p2')]
    return [band for band in bands if band[0] <= band[1]]


def coordination_model(n: int) -> Rcgs1Model:
    """
    協調問題の 1-RCGS を人数帯のガードで作る

    割合の帯は人数に切り上げ・切り捨てで直すので、任意の n ≥ 1 で作れる。

    Args:
        n: エージェント数

    Returns:
        Rcgs1Model: 状態 q0, q_80_20, q_p1, q_p2, q_else からなるモデル
    """
    if n < 1:
        raise ValueError(f"agent count must be positive, got {n}")
    start = StateSpec(
        name=START_STATE,
        label=frozenset(),
        actions=2,
        transitions=TransitionSpec(
            rules=tuple(_band(low, high, target) for low, high, target in _bands(n)),
            default='q_else',
        ),
    )
    states = (
        start,
        _sink(BOTH_STATE, frozenset({'p1', 'p2'})),
        _sink('q_p1', frozenset({'p1'})),
        _sink('q_p2', frozenset({'p2'})),
        _sink('q_else', frozenset()),
    )
    return Rcgs1Model(agent_count=n, propositions=frozenset({'p1', 'p2'}), states=states)


def coordination_scenarios(n: int) -> List[CoordinationScenario]:
    """
    協調問題の例題（q0 での判定）を n に合わせて生成する

    - grand: 全員なら p1 ∧ p2 を強制できる
    - proper_coalition: 一人でも欠けると強制できない
    - single_norm: 最後の 20% が行動 2 を禁じられ従うなら、残りがどう動いても両立を防げない
    - two_norms: 二つの禁止を守る 30% がいれば、先頭 60% は p1 も p2 も選べる
    - complement_forces_not_p1: 先頭 60% 以外は ¬p1 を強制できる
    """
    t = _check_size(n)
    single_norm = NormativeSystem.from_entries([(START_STATE, range(8 * t + 1, n + 1), [2])])
    two_norms = NormativeSystem.from_entries([
        (START_STATE, range(6 * t + 1, 8 * t + 1), [2]),
        (START_STATE, range(8 * t + 1, 9 * t + 1), [1]),
    ])
    empty = NormativeSystem.empty()
    return [
        CoordinationScenario('grand', empty, '<<all>> X (p1 & p2)', EMPTY_COALITION, True),
        CoordinationScenario('proper_coalition', empty, f'<<{{1-{n - 1}}}>> X (p1 & p2)',
                             EMPTY_COALITION, False),
        CoordinationScenario('single_norm', single_norm,
                             f'[{{{8 * t + 1}-{n}}}] [[{{{6 * t + 1}-{n}}}]] X (p1 & p2)',
                             EMPTY_COALITION, True),
        CoordinationScenario('two_norms', two_norms,
                             f'[{{{6 * t + 1}-{9 * t}}}] (<<{{1-{6 * t}}}>> X p1 & <<{{1-{6 * t}}}>> X p2)',
                             EMPTY_COALITION, True),
        CoordinationScenario('complement_forces_not_p1', empty, f'<<{{{6 * t + 1}-{n}}}>> X !p1',
                             frozenset(range(1, 6 * t + 1)), True),
    ]
