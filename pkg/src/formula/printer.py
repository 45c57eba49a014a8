"""
NCHATL 論理式の文字列化

parse_formula で読み戻すと同じ構文木になる正規形を出力する。
[[C]] X の略記は展開された形で出力される。
"""
from src.formula.ast import And, Comply, Formula, Globally, Next, Not, Or, Prop, Top, Until
from src.models.coalition import format_coalition

# 結合の強さ（大きいほど強い）
_OR, _AND, _UNTIL, _UNARY = range(4)


def _level(formula: Formula) -> int:
    if isinstance(formula, Or):
        return _OR
    if isinstance(formula, And):
        return _AND
    if isinstance(formula, Until):
        return _UNTIL
    return _UNARY


def _wrap(formula: Formula, minimum: int) -> str:
    text = print_formula(formula)
    return f"({text})" if _level(formula) < minimum else text


def print_formula(formula: Formula) -> str:
    """
    論理式を具象構文の文字列にする

    Args:
        formula: 抽象構文木

    Returns:
        str: 例 "!p", "<<{1}>> p U q", "[{9,10}] !<<{7-10}>> X !(p1 & p2)"
    """
    if isinstance(formula, Top):
        return 'true'
    if isinstance(formula, Prop):
        return formula.name
    if isinstance(formula, Not):
        return '!' + _wrap(formula.operand, _UNARY)
    if isinstance(formula, Or):
        return f"{_wrap(formula.left, _OR)} | {_wrap(formula.right, _AND)}"
    if isinstance(formula, And):
        return f"{_wrap(formula.left, _AND)} & {_wrap(formula.right, _UNTIL)}"
    if isinstance(formula, Next):
        return f"<<{format_coalition(formula.coalition)}>> X {_wrap(formula.operand, _UNARY)}"
    if isinstance(formula, Globally):
        return f"<<{format_coalition(formula.coalition)}>> G {_wrap(formula.operand, _UNARY)}"
    if isinstance(formula, Until):
        # 左辺は単項式、右辺は U を右結合でそのまま続けられる
        return (f"<<{format_coalition(formula.coalition)}>> "
                f"{_wrap(formula.left, _UNARY)} U {_wrap(formula.right, _UNTIL)}")
    if isinstance(formula, Comply):
        return f"[{format_coalition(formula.coalition)}] {_wrap(formula.operand, _UNARY)}"
    raise TypeError(f"unknown formula node: {formula!r}")
