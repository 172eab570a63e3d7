"""數值演算法"""
