"""
NCHATL の抽象構文木
"""
from dataclasses import dataclass
from typing import FrozenSet, Iterator, Set


class Formula:
    """論理式の基底クラス"""

    def children(self) -> tuple:
        return ()


@dataclass(frozen=True)
class Top(Formula):
    """恒真"""


@dataclass(frozen=True)
class Prop(Formula):
    """命題記号"""
    name: str


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula

    def children(self) -> tuple:
        return (self.operand,)


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True)
class And(Formula):
    """連言（¬(¬a ∨ ¬b) と同じ意味）"""
    left: Formula
    right: Formula

    def children(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True)
class Next(Formula):
    """⟨⟨C⟩⟩X φ"""
    coalition: FrozenSet[int]
    operand: Formula

    def children(self) -> tuple:
        return (self.operand,)


@dataclass(frozen=True)
class Globally(Formula):
    """⟨⟨C⟩⟩G φ"""
    coalition: FrozenSet[int]
    operand: Formula

    def children(self) -> tuple:
        return (self.operand,)


@dataclass(frozen=True)
class Until(Formula):
    """⟨⟨C⟩⟩ φ U ψ"""
    coalition: FrozenSet[int]
    left: Formula
    right: Formula

    def children(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True)
class Comply(Formula):
    """[C] φ: 規範に従う提携を C に置き換えて φ を評価する"""
    coalition: FrozenSet[int]
    operand: Formula

    def children(self) -> tuple:
        return (self.operand,)


def dual_next(coalition: FrozenSet[int], operand: Formula) -> Formula:
    """[[C]] X φ の展開 ¬⟨⟨C⟩⟩X ¬φ"""
    return Not(Next(coalition, Not(operand)))


def subformulas(formula: Formula) -> Iterator[Formula]:
    """部分式を前順で列挙する"""
    yield formula
    for child in formula.children():
        yield from subformulas(child)


def propositions(formula: Formula) -> Set[str]:
    return {f.name for f in subformulas(formula) if isinstance(f, Prop)}


def agents(formula: Formula) -> Set[int]:
    """式に現れる提携のメンバー全体"""
    members: Set[int] = set()
    for f in subformulas(formula):
        if isinstance(f, (Next, Globally, Until, Comply)):
            members |= f.coalition
    return members


def depth(formula: Formula) -> int:
    return 1 + max((depth(child) for child in formula.children()), default=0)
