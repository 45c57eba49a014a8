"""
規範体系（状態・エージェントごとの禁止行動集合）
"""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Tuple

from src.models.coalition import Coalition
from src.models.rcgs_model import Rcgs1Model

NormKey = Tuple[str, int]


@dataclass(frozen=True)
class NormativeSystem:
    """
    規範体系 η

    空でない項目だけを (状態名, エージェント) をキーに保持する。
    記載のない組は何も禁止しない。
    """
    forbids: Mapping[NormKey, FrozenSet[int]] = field(default_factory=dict)

    def __post_init__(self):
        sparse = {key: frozenset(actions) for key, actions in self.forbids.items() if actions}
        object.__setattr__(self, 'forbids', sparse)

    @classmethod
    def empty(cls) -> 'NormativeSystem':
        return cls({})

    @classmethod
    def from_entries(cls, entries: Iterable[Tuple[str, Iterable[int], Iterable[int]]]) -> 'NormativeSystem':
        """
        (状態名, エージェント列, 禁止行動列) の並びから規範体系を作る

        同じ (状態, エージェント) が複数回現れた場合は禁止集合の和をとる。
        """
        merged: Dict[NormKey, set] = {}
        for state, agents, actions in entries:
            actions = set(actions)
            for agent in agents:
                merged.setdefault((state, agent), set()).update(actions)
        return cls({key: frozenset(actions) for key, actions in merged.items()})

    def forbidden(self, state: str, agent: int) -> FrozenSet[int]:
        """η(q, a)"""
        return self.forbids.get((state, agent), frozenset())

    def legal_actions(self, model: Rcgs1Model, state: str, agent: int) -> FrozenSet[int]:
        """[𝔸(q)] \\ η(q, a)"""
        return frozenset(range(1, model.action_count(state) + 1)) - self.forbidden(state, agent)

    def entries(self) -> Iterator[Tuple[str, int, FrozenSet[int]]]:
        for (state, agent), actions in sorted(self.forbids.items()):
            yield state, agent, actions

    @property
    def is_empty(self) -> bool:
        return not self.forbids

    def restrict(self, coalition: Coalition) -> 'NormativeSystem':
        """η↾C: C に属するエージェントの禁止だけを残す"""
        return NormativeSystem({key: actions for key, actions in self.forbids.items()
                                if key[1] in coalition})

    def is_anonymous(self, model: Rcgs1Model) -> bool:
        """各状態で全エージェントの禁止集合が同じなら True"""
        for state in model.state_names:
            sets = {self.forbidden(state, agent) for agent in model.agents}
            if len(sets) > 1:
                return False
        return True


def restrict_norm(norm: NormativeSystem, coalition: Coalition) -> NormativeSystem:
    """規範体系を提携 coalition に制限する（η↾C）"""
    return norm.restrict(coalition)
