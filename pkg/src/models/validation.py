"""
モデルと規範体系の構造検証

違反は例外ではなくデータ（ValidationReport）として返す。
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from src.models.normative_system import NormativeSystem
from src.models.rcgs_model import UNRESOLVED, GuardedRule, Rcgs1Model, StateSpec
from src.profiles.compositions import composition_count, composition_matrix

logger = logging.getLogger(__name__)

DEFAULT_EXHAUSTIVE_THRESHOLD = 10_000


@dataclass(frozen=True)
class Violation:
    """検証違反一件"""
    kind: str
    message: str
    state: Optional[str] = None

    def __str__(self) -> str:
        return self.message


@dataclass
class ValidationReport:
    """検証結果（violations が空なら妥当）"""
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, message: str, state: Optional[str] = None) -> None:
        self.violations.append(Violation(kind, message, state))

    def kinds(self) -> List[str]:
        return [v.kind for v in self.violations]

    def extend(self, other: 'ValidationReport') -> None:
        self.violations.extend(other.violations)

    def to_dict(self) -> dict:
        return {
            'ok': self.ok,
            'violations': [{'kind': v.kind, 'state': v.state, 'message': v.message}
                           for v in self.violations],
        }


# --- 区間推論による被覆判定 ---

Box = Tuple[Tuple[int, int], ...]


def _tighten(box: Box, total: int) -> Optional[Box]:
    """和が total になる点が存在する範囲に区間を縮める（空なら None）"""
    lows = [lo for lo, _ in box]
    highs = [hi for _, hi in box]
    for _ in range(len(box) + 1):
        sum_lo, sum_hi = sum(lows), sum(highs)
        if sum_lo > total or sum_hi < total:
            return None
        changed = False
        for a in range(len(box)):
            new_lo = max(lows[a], total - (sum_hi - highs[a]))
            new_hi = min(highs[a], total - (sum_lo - lows[a]))
            if new_lo > new_hi:
                return None
            if (new_lo, new_hi) != (lows[a], highs[a]):
                lows[a], highs[a] = new_lo, new_hi
                changed = True
        if not changed:
            break
    return tuple(zip(lows, highs))


def _witness(box: Box, total: int) -> Tuple[int, ...]:
    """区間内で和が total になる具体的なプロファイルを一つ作る"""
    counts = [lo for lo, _ in box]
    rest = total - sum(counts)
    for a, (lo, hi) in enumerate(box):
        step = min(rest, hi - lo)
        counts[a] += step
        rest -= step
    return tuple(counts)


def _uncovered_witness(box: Box, rules: Sequence[GuardedRule], total: int) -> Optional[Tuple[int, ...]]:
    """
    規則の和集合が区間 box 内の全プロファイルを覆うか調べる

    規則の数だけ深くなる探索を、(区間, 次に調べる規則の番号) の組の
    作業スタックで進める。

    Returns:
        覆われないプロファイルの例。すべて覆われていれば None
    """
    stack: List[Tuple[Box, int]] = [(box, 0)]
    while stack:
        current, index = stack.pop()
        tight = _tighten(current, total)
        if tight is None:
            continue
        if index == len(rules):
            return _witness(tight, total)

        # 規則の範囲との交わりを求め、外側の部分だけを残りの規則で調べる
        inner = list(tight)
        pieces: List[Box] = []
        for guard in rules[index].guards:
            a = guard.action - 1
            lo, hi = inner[a]
            g_lo, g_hi = max(lo, guard.min_count), min(hi, guard.max_count)
            if g_lo > g_hi:
                pieces = [tight]
                break
            if lo < g_lo:
                below = list(inner)
                below[a] = (lo, g_lo - 1)
                pieces.append(tuple(below))
            if g_hi < hi:
                above = list(inner)
                above[a] = (g_hi + 1, hi)
                pieces.append(tuple(above))
            inner[a] = (g_lo, g_hi)
        stack.extend((piece, index + 1) for piece in reversed(pieces))
    return None


# --- モデルの検証 ---

def _check_guards(spec: StateSpec, n: int, report: ValidationReport) -> bool:
    ok = True
    for rule in spec.transitions.rules or ():
        for guard in rule.guards:
            if not 1 <= guard.action <= spec.actions:
                report.add('guard_action_out_of_range',
                           f"guard action out of range: action {guard.action} at {spec.name} "
                           f"(1..{spec.actions})", spec.name)
                ok = False
            if not 0 <= guard.min_count <= guard.max_count <= n:
                report.add('guard_bounds',
                           f"guard bounds out of range: action {guard.action} "
                           f"[{guard.min_count}, {guard.max_count}] at {spec.name}", spec.name)
    return ok


def _check_table(spec: StateSpec, n: int, report: ValidationReport) -> int:
    """表形式の行を検査し、妥当で重複のない行数を返す"""
    seen = set()
    for counts, _ in spec.transitions.table or ():
        counts = tuple(counts)
        if len(counts) != spec.actions or min(counts, default=0) < 0 or sum(counts) != n:
            report.add('table_profile_shape',
                       f"table profile {counts} at {spec.name} is not a full profile", spec.name)
        elif counts in seen:
            report.add('duplicate_table_profile',
                       f"duplicate table profile {counts} at {spec.name}", spec.name)
        else:
            seen.add(counts)
    return len(seen)


def _check_coverage(model: Rcgs1Model, spec: StateSpec, threshold: int,
                    valid_rows: int, report: ValidationReport) -> None:
    n = model.agent_count
    transitions = spec.transitions
    if transitions.default is not None:
        return
    total_profiles = composition_count(spec.actions, n)
    if total_profiles <= threshold:
        profiles = composition_matrix(spec.actions, n)
        targets = model.successor_indices(spec.name, profiles)
        for row in profiles[targets == UNRESOLVED].tolist():
            report.add('unresolved_profile',
                       f"profile ({','.join(map(str, row))}) unresolved at {spec.name}", spec.name)
        return
    if transitions.table is not None:
        # 行が重複なく妥当なら、行数がプロファイル総数に等しいときだけ全体を覆う
        if valid_rows < total_profiles:
            report.add('unresolved_profile',
                       f"table at {spec.name} covers {valid_rows} of {total_profiles} profiles",
                       spec.name)
        return
    box = tuple((0, n) for _ in range(spec.actions))
    witness = _uncovered_witness(box, tuple(transitions.rules or ()), n)
    if witness is not None:
        report.add('unresolved_profile',
                   f"profile ({','.join(map(str, witness))}) unresolved at {spec.name}", spec.name)


def validate_model(model: Rcgs1Model, exhaustive_threshold: int = DEFAULT_EXHAUSTIVE_THRESHOLD) -> ValidationReport:
    """
    1-RCGS モデルの整合性を検証する

    プロファイル総数が exhaustive_threshold 以下の状態は全列挙で、
    それを超える状態は人数区間の推論で遷移の全域性を確かめる。

    Args:
        model: 検証するモデル
        exhaustive_threshold: 全列挙を行うプロファイル数の上限

    Returns:
        ValidationReport: 違反の一覧
    """
    report = ValidationReport()
    n = model.agent_count
    if n < 1:
        report.add('agent_count', f"agent count must be positive, got {n}")
        return report
    if not model.states:
        report.add('no_states', "model has no states")
        return report

    seen = set()
    for spec in model.states:
        if spec.name in seen:
            report.add('duplicate_state', f"duplicate state name {spec.name}", spec.name)
        seen.add(spec.name)

    for spec in model.states:
        for symbol in sorted(spec.label - model.propositions):
            report.add('unknown_label', f"label symbol {symbol} at {spec.name} not in propositions",
                       spec.name)
        if spec.actions < 1:
            report.add('invalid_action_count',
                       f"action count at {spec.name} must be positive, got {spec.actions}", spec.name)
            continue
        for target in sorted(spec.transitions.targets()):
            if not model.has_state(target):
                report.add('unknown_target', f"transition target {target} at {spec.name} is not a state",
                           spec.name)
        if spec.transitions.table is not None and spec.transitions.rules is not None:
            report.add('transition_form', f"state {spec.name} mixes table and rules", spec.name)
        guards_ok = _check_guards(spec, n, report)
        valid_rows = _check_table(spec, n, report)
        if guards_ok:
            _check_coverage(model, spec, exhaustive_threshold, valid_rows, report)

    if report.ok:
        logger.debug(f"モデル検証: 違反なし（状態数 {model.state_count}, エージェント数 {n}）")
    else:
        logger.warning(f"モデル検証: {len(report.violations)} 件の違反")
    return report


def validate_norm(model: Rcgs1Model, norm: NormativeSystem) -> ValidationReport:
    """
    規範体系がモデルに対して妥当か検証する

    各 (q, a) について η(q,a) ⊆ [𝔸(q)] かつ合法な行動が残ることを確かめる。
    """
    report = ValidationReport()
    for state, agent, actions in norm.entries():
        if not model.has_state(state):
            report.add('unknown_state', f"norm refers to unknown state {state}", state)
            continue
        if not 1 <= agent <= model.agent_count:
            report.add('agent_out_of_range',
                       f"norm agent {agent} at {state} out of range 1..{model.agent_count}", state)
            continue
        m = model.action_count(state)
        outside = sorted(a for a in actions if not 1 <= a <= m)
        if outside:
            report.add('action_out_of_range',
                       f"forbidden action {outside[0]} for agent {agent} at {state} out of range 1..{m}",
                       state)
        if not set(range(1, m + 1)) - actions:
            report.add('no_legal_action', f"no legal action for agent {agent} at {state}", state)
    if not report.ok:
        logger.warning(f"規範体系の検証: {len(report.violations)} 件の違反")
    return report
