"""Exact iterated integrals over the simplex 0 < uₙ < … < u₁ < t."""
from typing import List, Sequence, Tuple

import sympy as sym

from paths.mat_poly_path import T, MatPolyPath, to_rational
from shuffle.permutation import Permutation
from utilities.exceptions import DegreeError


def simplex_variables(n: int) -> Tuple[sym.Symbol, ...]:
    return tuple(sym.symbols(f"u1:{n + 1}")) if n > 0 else ()


class SimplexPoly:
    """
    Matrix of polynomials in u₁..uₙ (and the upper bound t) over the simplex of dimension n.

    Integration runs innermost first: uₙ from 0 to uₙ₋₁, then uₙ₋₁, and finally u₁ from 0 to t.
    """

    def __init__(self, n: int, entries: Sequence[Sequence[sym.Poly]]):
        self.n = n
        self.variables = simplex_variables(n)
        self.gens = self.variables + (T,)
        self.entries: List[List[sym.Poly]] = [list(row) for row in entries]
        self.dim = len(self.entries)

    def _poly(self, expr) -> sym.Poly:
        return sym.Poly(expr, *self.gens, domain=sym.QQ)

    @classmethod
    def integrand(cls, sigma: Permutation, a: MatPolyPath) -> "SimplexPoly":
        """a(u_{σ1}) a(u_{σ2}) ⋯ a(u_{σn}) as an exact matrix of polynomials."""
        n = sigma.n
        variables = simplex_variables(n)
        gens = variables + (T,)
        d = a.dim
        factors = []
        for position in sigma.word:
            u = variables[position - 1]
            factors.append([
                [sym.Poly(a.entries[i][j].as_expr().subs(T, u), *gens, domain=sym.QQ) for j in range(d)]
                for i in range(d)
            ])
        product = factors[0]
        for factor in factors[1:]:
            product = [
                [sum((product[i][k] * factor[k][j] for k in range(d)), sym.Poly(0, *gens, domain=sym.QQ))
                 for j in range(d)]
                for i in range(d)
            ]
        return cls(n, product)

    def integrate_variable(self, j: int) -> "SimplexPoly":
        """Antiderivative in u_j from 0 to its upper bound u_{j−1} (t for j = 1)."""
        variable = self.variables[j - 1]
        upper = self.variables[j - 2] if j > 1 else T
        entries = [
            [self._poly(entry.integrate(variable).as_expr().subs(variable, upper)) for entry in row]
            for row in self.entries
        ]
        return SimplexPoly(self.n, entries)

    def integrate_simplex(self) -> MatPolyPath:
        current = self
        for j in range(self.n, 0, -1):
            current = current.integrate_variable(j)
        return MatPolyPath([[entry.as_expr() for entry in row] for row in current.entries])


def perm_integral_path(sigma: Permutation, a: MatPolyPath) -> MatPolyPath:
    """
    The simplex integral of a(u_{σ1})⋯a(u_{σn}) as a polynomial path in its upper bound t.

    Raises:
        DegreeError: For the empty permutation.
    """
    if sigma.n < 1:
        raise DegreeError("perm_integral_path needs n >= 1")
    return SimplexPoly.integrand(sigma, a).integrate_simplex()


def eval_perm_integral(sigma: Permutation, a: MatPolyPath, s) -> sym.Matrix:
    """
    Exact value of ∫_{0<uₙ<…<u₁<s} a(u_{σ1})⋯a(u_{σn}) du.

    Args:
        sigma (Permutation): σ ∈ Sₙ, n ≥ 1.
        a (MatPolyPath): The integrand path.
        s: Upper bound, s ≥ 0 (int, Fraction or 'p/q').

    Returns:
        sym.Matrix: Exact rational matrix.
    """
    point = to_rational(s)
    if point < 0:
        raise DegreeError(f"Upper bound must be non-negative, got {point}")
    return perm_integral_path(sigma, a).evaluate(point)
