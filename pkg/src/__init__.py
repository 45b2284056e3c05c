"""
Módulo para análise qualitativa da família de Kolmogorov no disco de Poincaré
"""

__version__ = "1.0.0"
__author__ = "Projeto Retratos de Fase"
