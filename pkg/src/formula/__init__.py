"""
NCHATL 論理式の構文木・解析・表示
"""
