"""
コマンドラインのパッケージ
"""
