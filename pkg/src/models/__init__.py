"""
1-RCGS モデル・提携・規範体系と検証
"""
