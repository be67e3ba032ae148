"""Floating-point helpers: matrix exponential, norms and a fixed-step RK4 reference."""
import math
from typing import Callable

import numpy as np
import sympy as sym

from paths.mat_poly_path import T, MatPolyPath
from utilities.exceptions import DegreeError, DimensionMismatchError

TAYLOR_TERMS = 18


def to_float_matrix(matrix: sym.Matrix) -> np.ndarray:
    return np.array(matrix.tolist(), dtype=float)


def inf_norm(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(matrix, np.inf))


def matrix_exp(matrix) -> np.ndarray:
    """
    Matrix exponential by scaling and squaring around a truncated Taylor series.

    Args:
        matrix: Square float matrix (array-like or sympy Matrix).

    Returns:
        np.ndarray: exp(matrix).

    Raises:
        DimensionMismatchError: If the input is not square.
    """
    if isinstance(matrix, sym.MatrixBase):
        matrix = to_float_matrix(matrix)
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"matrix_exp needs a square matrix, got shape {m.shape}")
    norm = inf_norm(m)
    squarings = max(0, math.ceil(math.log2(norm)) + 1) if norm > 0.5 else 0
    scaled = m / 2.0 ** squarings
    result = np.eye(m.shape[0])
    term = np.eye(m.shape[0])
    for k in range(1, TAYLOR_TERMS + 1):
        term = term @ scaled / k
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result


def path_function(a: MatPolyPath) -> Callable[[float], np.ndarray]:
    """Float evaluator t ↦ A(t) of an exact path."""
    expression = sym.Matrix(a.dim, a.dim, lambda i, j: a.entries[i][j].as_expr())
    evaluate = sym.lambdify(T, expression, modules="numpy")
    return lambda t: np.array(evaluate(t), dtype=float).reshape(a.dim, a.dim)


def rk4_reference(a: MatPolyPath, s: float, steps: int = 64) -> np.ndarray:
    """
    Classical fixed-step Runge–Kutta solution of Ż = A(t)Z, Z(0) = 1, at t = s.

    Only used for demonstration; the exact Chen series is the reference elsewhere.
    """
    if steps < 1:
        raise DegreeError(f"rk4_reference needs at least one step, got {steps}")
    f = path_function(a)
    h = float(s) / steps
    z = np.eye(a.dim)
    t = 0.0
    for _ in range(steps):
        k1 = f(t) @ z
        k2 = f(t + h / 2) @ (z + h / 2 * k1)
        k3 = f(t + h / 2) @ (z + h / 2 * k2)
        k4 = f(t + h) @ (z + h * k3)
        z = z + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return z
