"""
論理式パーサーとプリンタのテストモジュール

以下の機能について検証を行います：
1. 具象構文の解析（all の展開、[[C]] X の略記の展開）
2. 結合の強さと結合方向
3. 構文エラーの位置、未知の命題・範囲外のエージェント
4. parse(print(φ)) = φ（hypothesis による生成式 1000 件）
"""

import sys
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

# プロジェクトルートからの相対パスを設定
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.formula.ast import And, Comply, Globally, Next, Not, Or, Prop, Top, Until, depth
from src.formula.parser import parse_formula
from src.formula.printer import print_formula
from src.models.errors import FormulaReferenceError, FormulaSyntaxError

PROPS = frozenset({'p', 'q', 'r', 'p1', 'p2'})
N = 10
ALL = frozenset(range(1, N + 1))


def parse(text):
    return parse_formula(text, PROPS, N)


def test_parse_examples():
    p1, p2 = Prop('p1'), Prop('p2')
    assert parse("<<all>> X (p1 & p2)") == Next(ALL, And(p1, p2))
    assert parse("[{9,10}] [[{7-10}]] X (p1 & p2)") == \
        Comply(frozenset({9, 10}), Not(Next(frozenset({7, 8, 9, 10}), Not(And(p1, p2)))))
    assert parse("true") == Top()
    assert parse("<<{}>> G p") == Globally(frozenset(), Prop('p'))
    assert parse("<<{1,3-5}>> p U q") == Until(frozenset({1, 3, 4, 5}), Prop('p'), Prop('q'))
    print("解析テスト: 成功")


def test_precedence():
    p, q, r = Prop('p'), Prop('q'), Prop('r')
    assert parse("!p | q") == Or(Not(p), q)
    assert parse("<<{1}>> p U q | r") == Or(Until(frozenset({1}), p, q), r)
    assert parse("p & q | r") == Or(And(p, q), r)
    assert parse("p | q & r") == Or(p, And(q, r))
    assert parse("p | q | r") == Or(Or(p, q), r)
    assert parse("<<{1}>> X p & q") == And(Next(frozenset({1}), p), q)
    assert parse("<<{1}>> p U <<{2}>> q U r") == \
        Until(frozenset({1}), p, Until(frozenset({2}), q, r))
    assert parse("<<{1}>> p U q & r") == And(Until(frozenset({1}), p, q), r)
    assert parse("[{1}] p & q") == And(Comply(frozenset({1}), p), q)
    print("結合の強さテスト: 成功")


def test_syntax_error_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse("p & & q")
    assert info.value.position == 4
    assert info.value.column == 5
    with pytest.raises(FormulaSyntaxError) as info:
        parse("(p | q")
    assert info.value.position == len("(p | q")
    with pytest.raises(FormulaSyntaxError):
        parse("p $ q")
    with pytest.raises(FormulaSyntaxError):
        parse("<<{1}>> p")


def test_malformed_coalition():
    with pytest.raises(FormulaSyntaxError) as info:
        parse("<<{5-3}>> X p")
    assert info.value.position == 3
    with pytest.raises(FormulaSyntaxError):
        parse("<<{1,}>> X p")


def test_reference_errors():
    with pytest.raises(FormulaReferenceError) as info:
        parse("<<all>> X s")
    assert "'s'" in str(info.value)
    with pytest.raises(FormulaReferenceError) as info:
        parse("<<{11}>> X p")
    assert "agent 11 out of range 1..10" in str(info.value)
    with pytest.raises(FormulaReferenceError):
        parse("[{0}] p")


def test_print_examples():
    assert print_formula(Not(Prop('p'))) == "!p"
    assert print_formula(Until(frozenset({1}), Prop('p'), Prop('q'))) == "<<{1}>> p U q"
    assert print_formula(Comply(frozenset({9, 10}), Next(frozenset({7, 8, 9, 10}), Prop('p')))) == \
        "[{9,10}] <<{7-10}>> X p"
    assert print_formula(Until(frozenset(), Or(Prop('p'), Prop('q')), Prop('r'))) == "<<{}>> (p | q) U r"
    assert print_formula(Or(Prop('p'), Or(Prop('q'), Prop('r')))) == "p | (q | r)"


# --- 生成式による往復テスト ---

coalitions = st.frozensets(st.integers(min_value=1, max_value=N), max_size=N)
atoms = st.one_of(st.just(Top()), st.sampled_from(sorted(PROPS)).map(Prop))


def _extend(children):
    return st.one_of(
        children.map(Not),
        st.builds(Or, children, children),
        st.builds(And, children, children),
        st.builds(Next, coalitions, children),
        st.builds(Globally, coalitions, children),
        st.builds(Until, coalitions, children, children),
        st.builds(Comply, coalitions, children),
    )


formulas = st.recursive(atoms, _extend, max_leaves=12)


@given(formula=formulas)
@settings(max_examples=1000, deadline=None)
def test_print_parse_round_trip(formula):
    text = print_formula(formula)
    assert parse(text) == formula, text


@given(formula=formulas)
@settings(max_examples=100, deadline=None)
def test_printed_text_is_stable(formula):
    text = print_formula(formula)
    assert print_formula(parse(text)) == text
    assert depth(parse(text)) == depth(formula)
