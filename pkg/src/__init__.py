"""
NCHATL モデル検査器のメインパッケージ
"""
