"""
プロファイル（行動ごとの人数ベクトル）に関するパッケージ
"""
