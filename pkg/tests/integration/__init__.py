"""
統合テストパッケージ
""" 