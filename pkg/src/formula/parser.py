"""
NCHATL 論理式のパーサー

具象構文:
    true | p | !φ | φ | ψ | φ & ψ
    <<C>> X φ | <<C>> G φ | <<C>> φ U ψ
    [C] φ          （規範に従う提携の置き換え）
    [[C]] X φ      （!<<C>> X !φ の略記）
提携: {1,2,5} / {3-7} / {} / all

結合の強さ: 単項演算子 > U（右結合）> & > |
"""
from typing import FrozenSet, Iterable

from lark import Lark, Token, Transformer
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, VisitError

from src.formula.ast import (And, Comply, Formula, Globally, Next, Not, Or, Prop, Top, Until,
                             dual_next)
from src.models.errors import FormulaReferenceError, FormulaSyntaxError
from src.models.rcgs_model import Rcgs1Model

GRAMMAR = r'''
?start: disj

?disj: conj
    | disj "|" conj                         -> or_

?conj: until
    | conj "&" until                        -> and_

?until: unary
    | "<<" coalition ">>" unary "U" until   -> until

?unary: "!" unary                           -> not_
    | "<<" coalition ">>" "X" unary         -> next
    | "<<" coalition ">>" "G" unary         -> globally
    | "[" coalition "]" unary               -> comply
    | "[[" coalition "]]" "X" unary         -> dual_next
    | atom

?atom: "true"                               -> top
    | NAME                                  -> prop
    | "(" disj ")"

coalition: "all"                            -> all_agents
    | "{" (member ("," member)*)? "}"       -> members

member: INT                                 -> single
    | INT "-" INT                           -> span

NAME: /[A-Za-z_][A-Za-z0-9_]*/

%import common.INT
%import common.WS
%ignore WS
'''

_PARSER = Lark(GRAMMAR, parser='lalr', start='start')


class _FormulaBuilder(Transformer):
    """構文木を Formula に変換し、命題とエージェントの範囲を確認する"""

    def __init__(self, text: str, propositions: FrozenSet[str], agent_count: int):
        super().__init__()
        self.text = text
        self.propositions = propositions
        self.agent_count = agent_count

    def top(self, _items):
        return Top()

    def prop(self, items):
        token: Token = items[0]
        if token.value not in self.propositions:
            raise FormulaReferenceError(
                f"unknown proposition {token.value!r} at position {token.start_pos}")
        return Prop(token.value)

    def not_(self, items):
        return Not(items[0])

    def or_(self, items):
        return Or(items[0], items[1])

    def and_(self, items):
        return And(items[0], items[1])

    def next(self, items):
        return Next(items[0], items[1])

    def globally(self, items):
        return Globally(items[0], items[1])

    def until(self, items):
        return Until(items[0], items[1], items[2])

    def comply(self, items):
        return Comply(items[0], items[1])

    def dual_next(self, items):
        return dual_next(items[0], items[1])

    def all_agents(self, _items):
        return frozenset(range(1, self.agent_count + 1))

    def members(self, items):
        agents = frozenset(a for group in items for a in group)
        for agent in sorted(agents):
            if not 1 <= agent <= self.agent_count:
                raise FormulaReferenceError(f"agent {agent} out of range 1..{self.agent_count}")
        return agents

    def single(self, items):
        return [int(items[0])]

    def span(self, items):
        low, high = int(items[0]), int(items[1])
        if low > high:
            raise FormulaSyntaxError(f"malformed coalition range {low}-{high}",
                                     self.text, items[0].start_pos)
        return list(range(low, high + 1))


def _syntax_error(text: str, error: UnexpectedInput) -> FormulaSyntaxError:
    position = getattr(error, 'pos_in_stream', None)
    token = getattr(error, 'token', None)
    # 入力の終端では直前のトークンの位置が入るので文字列の長さに直す
    if position is None or position < 0 or getattr(token, 'type', None) == '$END':
        position = len(text)
    if isinstance(error, UnexpectedEOF) or position >= len(text):
        message = "unexpected end of formula"
    elif isinstance(error, UnexpectedCharacters):
        message = f"unexpected character {text[position]!r}"
    else:
        message = f"unexpected token {str(token)!r}" if token is not None else "syntax error"
    return FormulaSyntaxError(message, text, position)


def parse_formula(text: str, propositions: Iterable[str], agent_count: int) -> Formula:
    """
    論理式の文字列を解析する

    Args:
        text: 論理式
        propositions: 使用できる命題記号
        agent_count: エージェント数（all の展開と範囲確認に使う）

    Returns:
        Formula: 抽象構文木（[[C]] X の略記は展開済み）

    Raises:
        FormulaSyntaxError: 構文エラー（位置付き）
        FormulaReferenceError: 未知の命題・範囲外のエージェント
    """
    try:
        tree = _PARSER.parse(text)
    except UnexpectedInput as e:
        raise _syntax_error(text, e) from None
    try:
        return _FormulaBuilder(text, frozenset(propositions), agent_count).transform(tree)
    except VisitError as e:
        raise e.orig_exc from None


def parse_for_model(text: str, model: Rcgs1Model) -> Formula:
    """モデルの命題集合とエージェント数を使って論理式を解析する"""
    return parse_formula(text, model.propositions, model.agent_count)

