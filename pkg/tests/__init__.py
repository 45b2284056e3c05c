"""
Testes da análise qualitativa da família de Kolmogorov
"""
