"""
モデル検査エンジンのテストモジュール

以下の機能について検証を行います：
1. 協調問題（n=10）の例題の判定（同梱データと生成モデルの両方）
2. 否定の双対性と G・U の不動点の等式
3. 規範に従う提携の置き換え [C] の性質
4. 空の規範体系、提携の単調性、一手の強制の自明な場合
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# プロジェクトルートからの相対パスを設定
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.data_manager.coordination_family import START_STATE, coordination_model, coordination_scenarios
from src.data_manager.model_loader import load_model, load_norm, load_queries, model_from_dict
from src.formula.ast import And, Comply, Globally, Next, Not, Or, Prop, Top, Until
from src.formula.parser import parse_for_model
from src.models.coalition import grand_coalition
from src.models.errors import FormulaReferenceError
from src.models.normative_system import NormativeSystem
from src.oracle.random_instances import random_formulas, random_instance
from src.semantics.model_checker import CheckContext, NchatlModelChecker, StateSet, check_at, enforce, mcheck

BUNDLE = project_root / 'src' / 'data' / 'coordination'


@pytest.fixture
def bundle():
    return {
        'model': load_model(BUNDLE / 'model.json'),
        'eta': load_norm(BUNDLE / 'norm_eta.json'),
        'eta_prime': load_norm(BUNDLE / 'norm_eta_prime.json'),
    }


def _holds(model, norm, text, compliance=frozenset(), state=START_STATE):
    checker = NchatlModelChecker(model, norm)
    return checker.check_at(state, parse_for_model(text, model), compliance)


def _chain_model():
    """a → b → c（c で自己ループ）の一人モデル"""
    return model_from_dict({
        'agents': 1,
        'propositions': ['p', 'q'],
        'states': [
            {'id': 'a', 'label': ['p'], 'actions': 1, 'transitions': {'default': 'b'}},
            {'id': 'b', 'label': ['p'], 'actions': 1, 'transitions': {'default': 'c'}},
            {'id': 'c', 'label': ['q'], 'actions': 1, 'transitions': {'default': 'c'}},
        ],
    })


# --- 協調問題の例題 ---

def test_bundle_grand_coalition(bundle):
    """(a) 規範なしで全員なら p1 ∧ p2 を強制できる"""
    assert _holds(bundle['model'], NormativeSystem.empty(), "<<all>> X (p1 & p2)")
    print("全員の提携テスト: 成功")


def test_bundle_proper_coalition(bundle):
    """(b) 全員でない提携は強制できない"""
    for coalition in ("{1-9}", "{2-10}", "{1-5}"):
        assert not _holds(bundle['model'], NormativeSystem.empty(), f"<<{coalition}>> X (p1 & p2)"), coalition


def test_bundle_single_norm(bundle):
    """(c) 9,10 が行動 2 の禁止に従えば、7〜10 は両立を防げない"""
    model = bundle['model']
    assert _holds(model, bundle['eta'], "[{9,10}] [[{7-10}]] X (p1 & p2)")
    # 従う者がいなければ防げる
    assert not _holds(model, bundle['eta'], "[{}] [[{7-10}]] X (p1 & p2)")


def test_bundle_two_norms(bundle):
    """(d) 7〜9 が従えば 1〜6 は p1 も p2 も選べる"""
    model = bundle['model']
    assert _holds(model, bundle['eta_prime'], "[{7-9}] (<<{1-6}>> X p1 & <<{1-6}>> X p2)")
    assert not _holds(model, bundle['eta_prime'], "<<{1-6}>> X p1")


def test_bundle_complement_forces_not_p1(bundle):
    """(e) 1〜6 が規範に従う提携でも規範がなければ 7〜10 は ¬p1 を強制できる"""
    assert _holds(bundle['model'], NormativeSystem.empty(), "<<{7-10}>> X !p1", frozenset(range(1, 7)))


def test_bundle_queries_file(bundle):
    queries = load_queries(BUNDLE / 'queries.txt')
    assert len(queries) == 4
    norms = [NormativeSystem.empty(), NormativeSystem.empty(), bundle['eta'], bundle['eta_prime']]
    verdicts = [_holds(bundle['model'], norm, text) for norm, text in zip(norms, queries)]
    assert verdicts == [True, False, True, True]


def test_generated_scenarios_at_n10():
    model = coordination_model(10)
    for scenario in coordination_scenarios(10):
        verdict = _holds(model, scenario.norm, scenario.formula, scenario.compliance)
        assert verdict == scenario.expected, scenario.label
    print("生成モデルの例題テスト: 成功")


def test_generated_scenarios_at_n100():
    model = coordination_model(100)
    for scenario in coordination_scenarios(100):
        assert _holds(model, scenario.norm, scenario.formula, scenario.compliance) == scenario.expected, \
            scenario.label


def test_chunk_size_does_not_change_verdict():
    model = coordination_model(20)
    for scenario in coordination_scenarios(20):
        formula = parse_for_model(scenario.formula, model)
        small = NchatlModelChecker(model, scenario.norm, chunk_size=1)
        assert small.check_at(START_STATE, formula, scenario.compliance) == scenario.expected


# --- 意味論の等式 ---

def _random_cases(seed, count):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        instance = random_instance(rng)
        checker = NchatlModelChecker(instance.model, instance.norm)
        yield rng, instance, checker


def test_negation_duality():
    for rng, instance, checker in _random_cases(3, 30):
        everything = set(instance.model.state_names)
        for formula in random_formulas(rng, instance.model, 3):
            positive = set(checker.mcheck(formula, instance.compliance))
            negative = set(checker.mcheck(Not(formula), instance.compliance))
            assert positive | negative == everything
            assert not positive & negative


def test_fixpoint_identities():
    """G φ ≡ φ ∧ X G φ と φ U ψ ≡ ψ ∨ (φ ∧ X (φ U ψ))"""
    for rng, instance, checker in _random_cases(5, 100):
        phi, psi = random_formulas(rng, instance.model, 2, max_depth=2)
        coalition = instance.coalition
        box = Globally(coalition, phi)
        until = Until(coalition, phi, psi)
        a = instance.compliance
        assert checker.mcheck(box, a) == checker.mcheck(And(phi, Next(coalition, box)), a)
        assert checker.mcheck(until, a) == checker.mcheck(Or(psi, And(phi, Next(coalition, until))), a)
        # G は φ に、U は ψ を含み φ ∨ ψ に含まれる
        assert set(checker.mcheck(box, a)) <= set(checker.mcheck(phi, a))
        assert set(checker.mcheck(psi, a)) <= set(checker.mcheck(until, a))
        assert set(checker.mcheck(until, a)) <= set(checker.mcheck(Or(phi, psi), a))


def test_until_reaches_goal_along_chain():
    model = _chain_model()
    checker = NchatlModelChecker(model, NormativeSystem.empty())
    p, q = Prop('p'), Prop('q')
    assert checker.mcheck(Until(frozenset(), p, q)).to_list() == ['a', 'b', 'c']
    assert checker.mcheck(Globally(frozenset(), p)).to_list() == []
    assert checker.mcheck(Globally(frozenset({1}), q)).to_list() == ['c']
    assert checker.mcheck(Until(frozenset(), q, p)).to_list() == ['a', 'b']


def test_compliance_replacement():
    """[A′][A″]φ = [A″]φ で、[A′]φ は外側の提携によらない"""
    for rng, instance, checker in _random_cases(9, 30):
        model = instance.model
        (formula,) = random_formulas(rng, model, 1)
        outer, inner = instance.coalition, instance.compliance
        nested = checker.mcheck(Comply(outer, Comply(inner, formula)))
        assert nested == checker.mcheck(Comply(inner, formula))
        replaced = Comply(outer, formula)
        assert checker.mcheck(replaced, inner) == checker.mcheck(replaced, frozenset())
        assert checker.mcheck(replaced, inner) == checker.mcheck(formula, outer)


def test_empty_norm_ignores_compliance():
    for rng, instance, _ in _random_cases(13, 20):
        checker = NchatlModelChecker(instance.model, NormativeSystem.empty())
        everyone = grand_coalition(instance.model.agent_count)
        for formula in random_formulas(rng, instance.model, 2):
            assert checker.mcheck(formula, everyone) == checker.mcheck(formula, frozenset())


def test_coalition_monotonicity():
    for rng, instance, checker in _random_cases(17, 30):
        (phi,) = random_formulas(rng, instance.model, 1, max_depth=1)
        small = instance.coalition
        large = small | frozenset({1})
        a = instance.compliance
        assert set(checker.mcheck(Next(small, phi), a)) <= set(checker.mcheck(Next(large, phi), a))
        assert set(checker.mcheck(Globally(small, phi), a)) <= set(checker.mcheck(Globally(large, phi), a))


# --- 一手の強制と入口 ---

def test_enforce_trivial_targets():
    rng = np.random.default_rng(21)
    instance = random_instance(rng)
    checker = NchatlModelChecker(instance.model, instance.norm)
    for state in instance.model.state_names:
        assert checker.enforce(state, instance.coalition, instance.model.state_names, instance.compliance)
        assert not checker.enforce(state, instance.coalition, [], instance.compliance)


def test_top_and_its_negation():
    model = coordination_model(10)
    checker = NchatlModelChecker(model, NormativeSystem.empty())
    assert checker.mcheck(Top()).to_list() == sorted(model.state_names)
    assert len(checker.mcheck(Not(Top()))) == 0


def test_context_functions():
    model = coordination_model(10)
    ctx = CheckContext(model=model, norm=NormativeSystem.empty())
    formula = Next(grand_coalition(10), And(Prop('p1'), Prop('p2')))
    assert check_at(ctx, START_STATE, formula)
    assert START_STATE in mcheck(ctx, formula)
    assert enforce(ctx, START_STATE, range(1, 11), ['q_80_20'])
    assert not enforce(ctx, START_STATE, range(1, 10), ['q_80_20'])
    assert not enforce(ctx.with_compliance(range(1, 11)), START_STATE, [], ['q_80_20'])
    assert isinstance(mcheck(ctx, formula), StateSet)


def test_reference_errors():
    model = coordination_model(10)
    checker = NchatlModelChecker(model, NormativeSystem.empty())
    with pytest.raises(FormulaReferenceError):
        checker.mcheck(Prop('p3'))
    with pytest.raises(FormulaReferenceError):
        checker.mcheck(Next(frozenset({11}), Prop('p1')))
    with pytest.raises(FormulaReferenceError):
        checker.check_at('missing', Top())


def test_check_at_labels_and_dual_sugar(bundle):
    model = bundle['model']
    ctx = CheckContext(model=model, norm=bundle['eta'])
    assert check_at(ctx, 'q_80_20', Prop('p1'))
    assert not check_at(ctx, START_STATE, Prop('p1'))
    dual = parse_for_model("[[{7-10}]] X (p1 & p2)", model)
    direct = parse_for_model("<<{7-10}>> X !(p1 & p2)", model)
    everything = set(model.state_names)
    assert set(mcheck(ctx, dual)) == everything - set(mcheck(ctx, direct))
