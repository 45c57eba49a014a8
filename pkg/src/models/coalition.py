"""
エージェントと提携（コアリション）の表現
"""
from typing import FrozenSet, Iterable, List, Union

from src.models.errors import FormulaReferenceError, ModelFormatError

# エージェントは 1..n の整数、提携はその集合
AgentId = int
Coalition = FrozenSet[int]

EMPTY_COALITION: Coalition = frozenset()


def grand_coalition(agent_count: int) -> Coalition:
    """全エージェントからなる提携を返す"""
    return frozenset(range(1, agent_count + 1))


def complement(coalition: Coalition, agent_count: int) -> Coalition:
    """提携の補集合を返す"""
    return grand_coalition(agent_count) - coalition


def check_coalition(coalition: Iterable[int], agent_count: int) -> Coalition:
    """
    提携のメンバーが 1..n に収まっているか確認する

    Raises:
        FormulaReferenceError: 範囲外のエージェントを含む場合
    """
    members = frozenset(coalition)
    out_of_range = sorted(a for a in members if not 1 <= a <= agent_count)
    if out_of_range:
        raise FormulaReferenceError(
            f"agent {out_of_range[0]} out of range 1..{agent_count}")
    return members


def parse_agent_items(items: Iterable[Union[int, str]], path: str = '') -> List[int]:
    """
    整数または "i-j" 形式の範囲文字列のリストをエージェント番号に展開する

    Args:
        items: 整数・"3"・"3-7" の混在リスト
        path: エラーメッセージ用の位置情報

    Returns:
        List[int]: 展開されたエージェント番号
    """
    agents: List[int] = []
    for item in items:
        if isinstance(item, bool):
            raise ModelFormatError(f"invalid agent entry {item!r}", path)
        if isinstance(item, int):
            agents.append(item)
            continue
        text = str(item).strip()
        try:
            if '-' in text:
                low, high = (int(part) for part in text.split('-', 1))
                if low > high:
                    raise ModelFormatError(f"empty agent range {text!r}", path)
                agents.extend(range(low, high + 1))
            else:
                agents.append(int(text))
        except ValueError:
            raise ModelFormatError(f"invalid agent entry {item!r}", path) from None
    return agents


def parse_coalition_spec(text: str, agent_count: int) -> Coalition:
    """
    コマンドライン用の提携指定（"all"・"none"・"1,3-5"・"{1,2}"）を解釈する

    Raises:
        ModelFormatError: 書式が不正な場合
        FormulaReferenceError: 範囲外のエージェントを含む場合
    """
    spec = text.strip().strip('{}').strip()
    if spec == 'all':
        return grand_coalition(agent_count)
    if spec in ('none', ''):
        return EMPTY_COALITION
    items = [part for part in spec.split(',') if part.strip()]
    return check_coalition(parse_agent_items(items, 'coalition'), agent_count)


def format_coalition(coalition: Iterable[int]) -> str:
    """提携を "{1,3-5}" 形式の文字列にする（3人以上の連続は範囲表記）"""
    members = sorted(coalition)
    parts: List[str] = []
    start = 0
    while start < len(members):
        end = start
        while end + 1 < len(members) and members[end + 1] == members[end] + 1:
            end += 1
        if end - start >= 2:
            parts.append(f"{members[start]}-{members[end]}")
        else:
            parts.extend(str(a) for a in members[start:end + 1])
        start = end + 1
    return '{' + ','.join(parts) + '}'
