"""
高速な経路と総当たりの照合を乱数インスタンスで一括実行する

照合項目:
    profiles   compliant_profiles と総当たり列挙が集合として一致する
    hall       hall_condition と二部マッチングの判定が一致する
    semantics  mcheck と総当たり評価が状態集合として一致する
    anonymity  展開した構造が二人の行動の入れ替えに不変である
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from src.data_manager.model_loader import model_to_dict, norm_to_dict
from src.formula.printer import print_formula
from src.models.coalition import complement, format_coalition
from src.oracle.brute_force import NaiveEvaluator, brute_compliant_profiles, matching_check
from src.oracle.explicit_cgs import DEFAULT_EXPAND_BUDGET, check_anonymity, expand
from src.oracle.random_instances import OracleInstance, hall_scenario_instance, random_formulas, random_instance
from src.profiles.compositions import composition_matrix
from src.profiles.profile_sets import LegalRule, compliant_profiles, hall_condition
from src.semantics.model_checker import NchatlModelChecker

logger = logging.getLogger(__name__)

CHECKS = ('profiles', 'hall', 'semantics', 'anonymity')
DEFAULT_SEMANTIC_INSTANCES = 200
FORMULAS_PER_INSTANCE = 2
ANONYMITY_SAMPLES = 20


@dataclass
class OracleFailure:
    """最初に見つかった不一致（反例）"""
    check: str
    instance: int
    detail: Dict[str, Any]


@dataclass
class OracleReport:
    """照合結果の集計"""
    instances: int
    seed: int
    legal_rule: LegalRule
    passed: Dict[str, int] = field(default_factory=lambda: {name: 0 for name in CHECKS})
    checked: Dict[str, int] = field(default_factory=lambda: {name: 0 for name in CHECKS})
    completed: int = 0
    failure: Optional[OracleFailure] = None
    wall_time_ms: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failure is None

    def summary(self) -> str:
        passed = self.completed if self.ok else self.completed - 1
        return f"{passed}/{self.instances} pass"

    def to_dict(self) -> Dict[str, Any]:
        return {
            'instances': self.instances,
            'seed': self.seed,
            'legal_rule': self.legal_rule.value,
            'ok': self.ok,
            'summary': self.summary(),
            'checks': {name: {'passed': self.passed[name], 'checked': self.checked[name]} for name in CHECKS},
            'counterexample': None if self.failure is None else {
                'check': self.failure.check,
                'instance': self.failure.instance,
                **self.failure.detail,
            },
            'wall_time_ms': round(self.wall_time_ms, 3),
        }


def _describe(instance: OracleInstance) -> Dict[str, Any]:
    return {
        'label': instance.label,
        'model': model_to_dict(instance.model),
        'norm': norm_to_dict(instance.norm),
        'compliance': format_coalition(instance.compliance),
        'coalition': format_coalition(instance.coalition),
    }


def _check_profiles(instance: OracleInstance, rule: LegalRule, budget: int) -> Optional[Dict[str, Any]]:
    model = instance.model
    rest = complement(instance.coalition, model.agent_count)
    for state in model.state_names:
        for coalition in (instance.coalition, rest):
            fast = compliant_profiles(model, instance.norm, instance.compliance, state, coalition, rule)
            brute = brute_compliant_profiles(model, instance.norm, instance.compliance, state, coalition, budget)
            if fast.as_set() != brute:
                return {'state': state, 'acting': format_coalition(coalition),
                        'fast': fast.to_list(),
                        'brute': sorted(list(p.counts) for p in brute)}
    return None


def _check_hall(instance: OracleInstance, rule: LegalRule) -> Optional[Dict[str, Any]]:
    model = instance.model
    bound = instance.compliance & instance.coalition
    for state in model.state_names:
        for row in composition_matrix(model.action_count(state), len(bound)).tolist():
            fast = hall_condition(model, instance.norm, state, row, bound, rule)
            if fast != matching_check(model, instance.norm, state, row, bound):
                return {'state': state, 'bound': format_coalition(bound), 'profile': row, 'hall_condition': fast}
    return None


def _check_semantics(instance: OracleInstance, rule: LegalRule, budget: int,
                     rng: np.random.Generator) -> Optional[Dict[str, Any]]:
    checker = NchatlModelChecker(instance.model, instance.norm, legal_rule=rule)
    naive = NaiveEvaluator(instance.model, instance.norm, budget)
    for formula in random_formulas(rng, instance.model, FORMULAS_PER_INSTANCE):
        fast = checker.mcheck(formula, instance.compliance).to_list()
        slow = sorted(naive.evaluate(formula, instance.compliance))
        if fast != slow:
            return {'formula': print_formula(formula), 'mcheck': fast, 'naive': slow}
    return None


def _check_anonymity(instance: OracleInstance, budget: int,
                     rng: np.random.Generator) -> Optional[Dict[str, Any]]:
    failures = check_anonymity(expand(instance.model, budget), rng, ANONYMITY_SAMPLES)
    if failures:
        state, choice, i, j = failures[0]
        return {'state': state, 'actions': list(choice), 'swapped': [i, j]}
    return None


def run_oracle_suite(instances: int = 500, seed: int = 2024, budget: int = DEFAULT_EXPAND_BUDGET,
                     legal_rule: LegalRule = LegalRule.PROSE,
                     semantic_instances: int = DEFAULT_SEMANTIC_INSTANCES) -> OracleReport:
    """
    乱数インスタンスで照合を実行する（最初の不一致で止まる）

    先頭のインスタンスは5人・行動3つのホール条件の例で、
    合法人数の数え方の誤りはここで必ず検出される。

    Args:
        instances: インスタンス数
        seed: 乱数シード
        budget: 総当たりの予算
        legal_rule: 高速な経路で使う合法人数の数え方
        semantic_instances: 論理式の照合も行う先頭インスタンス数

    Returns:
        OracleReport: 照合結果
    """
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    report = OracleReport(instances=instances, seed=seed, legal_rule=legal_rule)
    logger.info(f"照合を開始します: {instances} インスタンス, シード {seed}, 数え方 {legal_rule.value}")

    for index in range(instances):
        instance = hall_scenario_instance() if index == 0 else random_instance(rng, label=f"random_{index}")
        report.completed += 1
        checks = {
            'profiles': lambda: _check_profiles(instance, legal_rule, budget),
            'hall': lambda: _check_hall(instance, legal_rule),
            'anonymity': lambda: _check_anonymity(instance, budget, rng),
        }
        if index < semantic_instances:
            checks['semantics'] = lambda: _check_semantics(instance, legal_rule, budget, rng)
        for name in CHECKS:
            if name not in checks:
                continue
            report.checked[name] += 1
            detail = checks[name]()
            if detail is not None:
                report.failure = OracleFailure(check=name, instance=index, detail={**_describe(instance), **detail})
                logger.warning(f"照合で不一致が見つかりました: {name}（インスタンス {index}: {instance.label}）")
                report.wall_time_ms = (time.perf_counter() - start) * 1000
                return report
            report.passed[name] += 1

    report.wall_time_ms = (time.perf_counter() - start) * 1000
    logger.info(f"照合が完了しました: {report.summary()}（{report.wall_time_ms:.0f} ms）")
    return report
