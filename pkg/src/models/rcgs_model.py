"""
1-RCGS（役割が一つの並行ゲーム構造）のモデルクラス

遷移は「各行動を何人が選んだか」だけで決まる。遷移関数は
明示的な表か、行動ごとの人数区間をガードとする規則列で与える。
"""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from src.models.errors import FormulaReferenceError, UnresolvedProfileError
from src.profiles.compositions import composition_matrix
from src.profiles.profile import Profile

UNRESOLVED = -1


@dataclass(frozen=True)
class StateId:
    """状態の識別子（名前と 0 始まりの連番）"""
    name: str
    index: int

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Guard:
    """行動 action を選んだ人数が min_count..max_count（両端含む）であること"""
    action: int
    min_count: int
    max_count: int


@dataclass(frozen=True)
class GuardedRule:
    """すべてのガードを満たすプロファイルを target に遷移させる規則"""
    guards: Tuple[Guard, ...]
    target: str

    def matches(self, counts: Sequence[int]) -> bool:
        return all(g.min_count <= counts[g.action - 1] <= g.max_count for g in self.guards)


@dataclass(frozen=True)
class TransitionSpec:
    """
    状態ごとの遷移指定

    table と rules のどちらか一方を使う。先に一致したものが優先され、
    どれにも一致しないプロファイルは default に遷移する。
    """
    table: Optional[Tuple[Tuple[Tuple[int, ...], str], ...]] = None
    rules: Optional[Tuple[GuardedRule, ...]] = None
    default: Optional[str] = None

    @property
    def kind(self) -> str:
        return 'table' if self.table is not None else 'rules'

    def targets(self) -> Set[str]:
        """遷移先として現れる状態名"""
        names = {target for _, target in self.table or ()}
        names |= {rule.target for rule in self.rules or ()}
        if self.default is not None:
            names.add(self.default)
        return names


@dataclass(frozen=True)
class StateSpec:
    """状態の定義（ラベル・行動数・遷移）"""
    name: str
    label: FrozenSet[str]
    actions: int
    transitions: TransitionSpec


@dataclass(frozen=True)
class Rcgs1Model:
    """
    1-RCGS モデル

    構築後は変更しない。状態は与えられた順に 0 から番号付けされる。
    """
    agent_count: int
    propositions: FrozenSet[str]
    states: Tuple[StateSpec, ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)
    _table_lookup: Dict[int, Dict[Tuple[int, ...], str]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index: Dict[str, int] = {}
        for i, spec in enumerate(self.states):
            # 重複した名前は検証で報告する。ここでは最初の定義を使う
            index.setdefault(spec.name, i)
        object.__setattr__(self, '_index', index)
        lookup: Dict[int, Dict[Tuple[int, ...], str]] = {}
        for i, spec in enumerate(self.states):
            if spec.transitions.table is not None:
                rows: Dict[Tuple[int, ...], str] = {}
                for counts, target in spec.transitions.table:
                    rows.setdefault(tuple(counts), target)
                lookup[i] = rows
        object.__setattr__(self, '_table_lookup', lookup)

    # --- 状態の参照 ---

    @property
    def state_count(self) -> int:
        return len(self.states)

    @property
    def state_names(self) -> List[str]:
        return [spec.name for spec in self.states]

    @property
    def agents(self) -> range:
        return range(1, self.agent_count + 1)

    def has_state(self, name: str) -> bool:
        return name in self._index

    def state_id(self, state: Union[str, StateId, int]) -> StateId:
        """
        状態名・StateId・番号から StateId を得る

        Raises:
            FormulaReferenceError: 未知の状態
        """
        if isinstance(state, StateId):
            return state
        if isinstance(state, int):
            if not 0 <= state < len(self.states):
                raise FormulaReferenceError(f"unknown state index {state}")
            return StateId(self.states[state].name, state)
        if state not in self._index:
            raise FormulaReferenceError(f"unknown state {state!r}")
        return StateId(state, self._index[state])

    def spec(self, state: Union[str, StateId, int]) -> StateSpec:
        return self.states[self.state_id(state).index]

    def action_count(self, state: Union[str, StateId, int]) -> int:
        return self.spec(state).actions

    def label(self, state: Union[str, StateId, int]) -> FrozenSet[str]:
        return self.spec(state).label

    def states_labeled(self, proposition: str) -> np.ndarray:
        """命題 proposition が成り立つ状態のマスク"""
        return np.array([proposition in spec.label for spec in self.states], dtype=bool)

    # --- 遷移 ---

    def _target_index(self, name: Optional[str]) -> int:
        if name is None:
            return UNRESOLVED
        return self._index.get(name, UNRESOLVED)

    def successor_indices(self, state: Union[str, StateId, int], profiles: np.ndarray) -> np.ndarray:
        """
        プロファイル行列の各行の遷移先番号を返す（解決できない行は -1）

        Args:
            state: 遷移元の状態
            profiles: shape (行数, 行動数) の人数行列

        Returns:
            np.ndarray: 各行の遷移先の状態番号
        """
        sid = self.state_id(state)
        spec = self.states[sid.index]
        profiles = np.asarray(profiles, dtype=np.int64).reshape(-1, spec.actions)
        result = np.full(profiles.shape[0], UNRESOLVED, dtype=np.int64)

        if spec.transitions.table is not None:
            rows = self._table_lookup[sid.index]
            for i, counts in enumerate(map(tuple, profiles.tolist())):
                result[i] = self._target_index(rows.get(counts))
        else:
            for rule in spec.transitions.rules or ():
                open_rows = result == UNRESOLVED
                if not open_rows.any():
                    break
                match = open_rows.copy()
                for guard in rule.guards:
                    column = profiles[:, guard.action - 1]
                    match &= (column >= guard.min_count) & (column <= guard.max_count)
                result[match] = self._target_index(rule.target)

        if spec.transitions.default is not None:
            result[result == UNRESOLVED] = self._target_index(spec.transitions.default)
        return result

    def successor(self, state: Union[str, StateId, int], profile: Union[Profile, Iterable[int]]) -> StateId:
        """
        完全プロファイル F に対する遷移先 δ(q, F) を返す

        Raises:
            ValueError: F の長さが行動数と違う、または和がエージェント数と違う場合
            UnresolvedProfileError: 遷移先が決まらない場合
        """
        sid = self.state_id(state)
        counts = profile.counts if isinstance(profile, Profile) else tuple(int(c) for c in profile)
        actions = self.states[sid.index].actions
        if len(counts) != actions or sum(counts) != self.agent_count or min(counts) < 0:
            raise ValueError(
                f"{counts} is not a full profile at {sid.name} "
                f"({actions} actions, {self.agent_count} agents)")
        target = int(self.successor_indices(sid, np.array([counts]))[0])
        if target == UNRESOLVED:
            raise UnresolvedProfileError(f"profile {counts} unresolved at {sid.name}")
        return StateId(self.states[target].name, target)

    def successors(self, state: Union[str, StateId, int]) -> Set[str]:
        """一手で到達できる状態名の集合"""
        sid = self.state_id(state)
        targets = self.successor_indices(
            sid, composition_matrix(self.states[sid.index].actions, self.agent_count))
        return {self.states[t].name for t in set(targets.tolist()) if t != UNRESOLVED}
