"""
設定管理のパッケージ
"""
