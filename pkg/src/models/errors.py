"""
モデル検査器で共通に使う例外クラス
"""
from typing import Optional


class NchatlError(Exception):
    """モデル検査器の例外の基底クラス"""


class ModelFormatError(NchatlError, ValueError):
    """モデル・規範ファイルの形式エラー"""

    def __init__(self, message: str, path: str = ''):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class FormulaSyntaxError(NchatlError, ValueError):
    """論理式の構文エラー（位置情報付き）"""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        self.line = text.count('\n', 0, position) + 1
        self.column = position - (text.rfind('\n', 0, position) + 1) + 1
        super().__init__(f"{message} (line {self.line}, column {self.column})")


class FormulaReferenceError(NchatlError, ValueError):
    """未知の命題・範囲外のエージェント・未知の状態の参照"""


class ProfileMismatchError(NchatlError, ValueError):
    """長さの異なるプロファイル同士の演算"""


class UnresolvedProfileError(NchatlError, RuntimeError):
    """遷移先が決まらないプロファイル（検証済みモデルでは起こらない）"""


class BudgetExceededError(NchatlError, RuntimeError):
    """オラクル処理の予算超過"""

    def __init__(self, what: str, required: int, budget: Optional[int]):
        self.required = required
        self.budget = budget
        super().__init__(f"{what} requires {required} entries, budget is {budget}")
