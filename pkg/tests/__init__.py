"""
テストパッケージ
""" 