"""
照合用の小さな乱数インスタンスと乱数論理式の生成

乱数は numpy の Generator から取り、シードが同じなら同じ列になる。
"""
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from src.formula.ast import And, Comply, Formula, Globally, Next, Not, Or, Prop, Top, Until
from src.models.coalition import Coalition
from src.models.normative_system import NormativeSystem
from src.models.rcgs_model import Rcgs1Model, StateSpec, TransitionSpec
from src.profiles.compositions import composition_matrix

PROPOSITIONS = ('p1', 'p2')
FORBID_PROBABILITY = 0.3
MAX_AGENTS = 4
MAX_STATES = 4
MAX_ACTIONS = 3


@dataclass(frozen=True)
class OracleInstance:
    """照合一件分の入力（モデル・規範・規範に従う提携 A・行動する提携 B）"""
    label: str
    model: Rcgs1Model
    norm: NormativeSystem
    compliance: Coalition
    coalition: Coalition


def random_coalition(rng: np.random.Generator, agent_count: int) -> Coalition:
    """各エージェントを確率 1/2 で含む提携"""
    picks = rng.random(agent_count) < 0.5
    return frozenset(int(a) + 1 for a in np.flatnonzero(picks))


def random_model(rng: np.random.Generator) -> Rcgs1Model:
    """n ≤ 4, |Q| ≤ 4, 𝔸 ≤ 3 の表形式モデル（遷移先は一様に選ぶ）"""
    n = int(rng.integers(1, MAX_AGENTS + 1))
    size = int(rng.integers(1, MAX_STATES + 1))
    names = [f"q{i}" for i in range(size)]
    states = []
    for name in names:
        actions = int(rng.integers(1, MAX_ACTIONS + 1))
        rows = tuple((tuple(row), names[int(rng.integers(size))])
                     for row in composition_matrix(actions, n).tolist())
        label = frozenset(p for p in PROPOSITIONS if rng.random() < 0.5)
        states.append(StateSpec(name=name, label=label, actions=actions, transitions=TransitionSpec(table=rows)))
    return Rcgs1Model(agent_count=n, propositions=frozenset(PROPOSITIONS), states=tuple(states))


def random_norm(rng: np.random.Generator, model: Rcgs1Model) -> NormativeSystem:
    """
    各 (状態, エージェント, 行動) を確率 0.3 で禁止する規範体系

    すべての行動が禁止された組は、一つを無作為に許して合法性を保つ。
    """
    entries = []
    for spec in model.states:
        for agent in model.agents:
            forbidden = {a for a in range(1, spec.actions + 1) if rng.random() < FORBID_PROBABILITY}
            if len(forbidden) == spec.actions:
                forbidden.discard(int(rng.integers(1, spec.actions + 1)))
            if forbidden:
                entries.append((spec.name, [agent], sorted(forbidden)))
    return NormativeSystem.from_entries(entries)


def random_instance(rng: np.random.Generator, label: str = 'random') -> OracleInstance:
    model = random_model(rng)
    norm = random_norm(rng, model)
    return OracleInstance(label=label, model=model, norm=norm,
                          compliance=random_coalition(rng, model.agent_count),
                          coalition=random_coalition(rng, model.agent_count))


def hall_scenario_instance() -> OracleInstance:
    """
    5人・行動3つの一状態モデル

    A = {2,3,4} が規範に従い、B = {3,4,5} が行動する。
    エージェント3は行動2を、エージェント4は行動1と2を禁じられている。
    """
    model = Rcgs1Model(
        agent_count=5,
        propositions=frozenset(PROPOSITIONS),
        states=(StateSpec(name='q0', label=frozenset({'p1'}), actions=3,
                          transitions=TransitionSpec(rules=(), default='q0')),),
    )
    norm = NormativeSystem.from_entries([('q0', [3], [2]), ('q0', [4], [1, 2])])
    return OracleInstance(label='hall_scenario', model=model, norm=norm,
                          compliance=frozenset({2, 3, 4}), coalition=frozenset({3, 4, 5}))


def _pick(rng: np.random.Generator, options: Sequence) -> object:
    return options[int(rng.integers(len(options)))]


def random_formula(rng: np.random.Generator, propositions: Sequence[str], agent_count: int,
                   depth: int) -> Formula:
    """
    深さ depth 以下の乱数論理式（[C] の入れ子も含む）

    Args:
        rng: 乱数生成器
        propositions: 使う命題記号
        agent_count: 提携を選ぶエージェント数
        depth: 演算子の入れ子の上限
    """
    if depth <= 0 or rng.random() < 0.2:
        if rng.random() < 0.15:
            return Top()
        return Prop(str(_pick(rng, sorted(propositions))))
    kind = _pick(rng, ('not', 'or', 'and', 'next', 'globally', 'until', 'comply'))
    sub = depth - 1
    if kind == 'not':
        return Not(random_formula(rng, propositions, agent_count, sub))
    if kind in ('or', 'and'):
        left = random_formula(rng, propositions, agent_count, sub)
        right = random_formula(rng, propositions, agent_count, sub)
        return Or(left, right) if kind == 'or' else And(left, right)
    coalition = random_coalition(rng, agent_count)
    if kind == 'until':
        return Until(coalition, random_formula(rng, propositions, agent_count, sub),
                     random_formula(rng, propositions, agent_count, sub))
    operand = random_formula(rng, propositions, agent_count, sub)
    if kind == 'next':
        return Next(coalition, operand)
    if kind == 'globally':
        return Globally(coalition, operand)
    return Comply(coalition, operand)


def random_formulas(rng: np.random.Generator, model: Rcgs1Model, count: int, max_depth: int = 3) -> List[Formula]:
    return [random_formula(rng, sorted(model.propositions), model.agent_count, int(rng.integers(1, max_depth + 1)))
            for _ in range(count)]
