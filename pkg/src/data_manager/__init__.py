"""
モデル・規範体系・例題データの入出力
"""
