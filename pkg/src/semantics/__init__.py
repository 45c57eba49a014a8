"""
モデル検査エンジン
"""
