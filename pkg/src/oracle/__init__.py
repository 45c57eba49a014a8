"""
総当たりによる照合
"""
