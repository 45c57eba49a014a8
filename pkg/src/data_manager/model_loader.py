"""
モデル・規範体系・問い合わせファイルの読み込みと書き出し
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

from src.models.coalition import parse_agent_items
from src.models.errors import ModelFormatError
from src.models.normative_system import NormativeSystem
from src.models.rcgs_model import Guard, GuardedRule, Rcgs1Model, StateSpec, TransitionSpec

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _read_json(path: PathLike) -> Any:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"invalid JSON: {e.msg} (line {e.lineno}, column {e.colno})",
                               str(path)) from None


def _require(doc: Dict[str, Any], key: str, path: str) -> Any:
    if not isinstance(doc, dict) or key not in doc:
        raise ModelFormatError(f"missing field '{key}'", path)
    return doc[key]


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ModelFormatError(f"expected an integer, got {value!r}", path)
    return value


def _transitions_from_dict(doc: Dict[str, Any], path: str) -> TransitionSpec:
    if not isinstance(doc, dict):
        raise ModelFormatError("transitions must be an object", path)
    default = doc.get('default')
    if 'table' in doc:
        table = []
        for i, row in enumerate(doc['table']):
            row_path = f"{path}.table[{i}]"
            counts = tuple(_int(c, row_path + '.profile') for c in _require(row, 'profile', row_path))
            table.append((counts, str(_require(row, 'to', row_path))))
        return TransitionSpec(table=tuple(table), default=default)
    rules = []
    for i, rule in enumerate(doc.get('rules', [])):
        rule_path = f"{path}.rules[{i}]"
        guards = []
        for j, guard in enumerate(_require(rule, 'guards', rule_path)):
            guard_path = f"{rule_path}.guards[{j}]"
            guards.append(Guard(
                action=_int(_require(guard, 'action', guard_path), guard_path + '.action'),
                min_count=_int(_require(guard, 'min', guard_path), guard_path + '.min'),
                max_count=_int(_require(guard, 'max', guard_path), guard_path + '.max'),
            ))
        rules.append(GuardedRule(guards=tuple(guards), target=str(_require(rule, 'to', rule_path))))
    return TransitionSpec(rules=tuple(rules), default=default)


def model_from_dict(doc: Dict[str, Any]) -> Rcgs1Model:
    """
    モデル文書（辞書）から Rcgs1Model を作る

    Raises:
        ModelFormatError: 必須フィールドの欠落や型の誤り
    """
    agent_count = _int(_require(doc, 'agents', '$'), '$.agents')
    propositions = frozenset(str(p) for p in doc.get('propositions', []))
    states = []
    for i, state in enumerate(_require(doc, 'states', '$')):
        path = f"$.states[{i}]"
        states.append(StateSpec(
            name=str(_require(state, 'id', path)),
            label=frozenset(str(p) for p in state.get('label', [])),
            actions=_int(state.get('actions', 1), path + '.actions'),
            transitions=_transitions_from_dict(state.get('transitions', {}), path + '.transitions'),
        ))
    return Rcgs1Model(agent_count=agent_count, propositions=propositions, states=tuple(states))


def model_to_dict(model: Rcgs1Model) -> Dict[str, Any]:
    """Rcgs1Model をモデル文書（辞書）に変換する"""
    states = []
    for spec in model.states:
        transitions: Dict[str, Any] = {}
        if spec.transitions.table is not None:
            transitions['table'] = [{'profile': list(counts), 'to': target}
                                    for counts, target in spec.transitions.table]
        else:
            transitions['rules'] = [
                {'guards': [{'action': g.action, 'min': g.min_count, 'max': g.max_count}
                            for g in rule.guards],
                 'to': rule.target}
                for rule in spec.transitions.rules or ()]
        if spec.transitions.default is not None:
            transitions['default'] = spec.transitions.default
        states.append({'id': spec.name, 'label': sorted(spec.label), 'actions': spec.actions,
                       'transitions': transitions})
    return {'agents': model.agent_count, 'propositions': sorted(model.propositions), 'states': states}


def norm_from_dict(doc: Dict[str, Any]) -> NormativeSystem:
    """
    規範文書（辞書）から NormativeSystem を作る

    agents には整数と "i-j" 形式の範囲を混在できる。
    """
    entries = []
    for i, rule in enumerate(_require(doc, 'rules', '$')):
        path = f"$.rules[{i}]"
        agents = parse_agent_items(_require(rule, 'agents', path), path + '.agents')
        forbid = [_int(a, path + '.forbid') for a in _require(rule, 'forbid', path)]
        entries.append((str(_require(rule, 'state', path)), agents, forbid))
    return NormativeSystem.from_entries(entries)


def norm_to_dict(norm: NormativeSystem) -> Dict[str, Any]:
    """NormativeSystem を規範文書（辞書）に変換する"""
    return {'rules': [{'state': state, 'agents': [agent], 'forbid': sorted(actions)}
                      for state, agent, actions in norm.entries()]}


def load_model(path: PathLike) -> Rcgs1Model:
    """モデルファイル（JSON）を読み込む"""
    model = model_from_dict(_read_json(path))
    logger.info(f"モデルを読み込みました: {path}（状態数 {model.state_count}, エージェント数 {model.agent_count}）")
    return model


def load_norm(path: PathLike) -> NormativeSystem:
    """規範ファイル（JSON）を読み込む"""
    norm = norm_from_dict(_read_json(path))
    logger.info(f"規範体系を読み込みました: {path}（{len(norm.forbids)} 項目）")
    return norm


def load_queries(path: PathLike) -> List[str]:
    """問い合わせファイルを読み込む（1行1式、# 以降はコメント）"""
    queries = []
    with open(path, 'r', encoding='utf-8') as f:
        for line in f:
            text = line.split('#', 1)[0].strip()
            if text:
                queries.append(text)
    return queries


def save_json(doc: Any, path: PathLike) -> None:
    """文書をJSONとして保存する"""
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(doc, f, ensure_ascii=False, indent=2)
    logger.info(f"JSONを保存しました: {path}")
