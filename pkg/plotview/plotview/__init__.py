from .plot import ContractViolation, FigureSpec, render

__all__ = ["ContractViolation", "FigureSpec", "render"]
