import json
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Union

import sympy as sym

from utilities.exceptions import DimensionMismatchError, PathFormatError

T = sym.Symbol("t")

Coefficient = Union[int, Fraction, str, sym.Rational]


def to_rational(value: Coefficient) -> sym.Rational:
    """Exact sympy rational from an int, a Fraction or a 'p/q' string."""
    if isinstance(value, Fraction):
        return sym.Rational(value.numerator, value.denominator)
    if isinstance(value, float):
        raise TypeError("Floating-point coefficients are not exact; pass a Fraction or a 'p/q' string")
    return sym.Rational(value)


def rational_text(value: sym.Rational) -> str:
    value = sym.Rational(value)
    return str(value.p) if value.q == 1 else f"{value.p}/{value.q}"


def _poly(expr) -> sym.Poly:
    return sym.Poly(expr, T, domain=sym.QQ)


class MatPolyPath:
    """
    Square matrix of univariate polynomials in t with exact rational coefficients.

    ``*`` scales by a rational, ``@`` is the matrix product. The antiderivative that
    vanishes at t = 0 is ``integrate``; ``evaluate`` returns an exact sympy Matrix.
    """

    __slots__ = ("dim", "entries")

    def __init__(self, entries: Sequence[Sequence[Any]]):
        rows = [list(row) for row in entries]
        if not rows or any(len(row) != len(rows) for row in rows):
            raise DimensionMismatchError(f"A path needs a non-empty square matrix, got {len(rows)} rows")
        self.dim = len(rows)
        self.entries: List[List[sym.Poly]] = [
            [entry if isinstance(entry, sym.Poly) else _poly(entry) for entry in row] for row in rows
        ]

    # Construction

    @classmethod
    def from_coefficients(cls, rows: Sequence[Sequence[Sequence[Coefficient]]]) -> "MatPolyPath":
        """Entry (i, j) is Σ cₖ tᵏ for the coefficient list rows[i][j] = [c0, c1, ...]."""
        return cls([
            [sum((to_rational(c) * T ** k for k, c in enumerate(coefficients)), sym.Integer(0)) for coefficients in row]
            for row in rows
        ])

    @classmethod
    def from_matrix(cls, matrix: sym.Matrix) -> "MatPolyPath":
        if matrix.rows != matrix.cols:
            raise DimensionMismatchError(f"Matrix must be square, got {matrix.shape}")
        return cls([[matrix[i, j] for j in range(matrix.cols)] for i in range(matrix.rows)])

    @classmethod
    def identity(cls, dim: int) -> "MatPolyPath":
        return cls.from_matrix(sym.eye(dim))

    @classmethod
    def zero(cls, dim: int) -> "MatPolyPath":
        return cls.from_matrix(sym.zeros(dim, dim))

    def zero_like(self) -> "MatPolyPath":
        return MatPolyPath.zero(self.dim)

    # Ring structure

    def _check_dim(self, other: "MatPolyPath") -> None:
        if not isinstance(other, MatPolyPath):
            raise TypeError(f"Cannot combine MatPolyPath with {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionMismatchError(f"Path dimensions differ: {self.dim} vs {other.dim}")

    def __add__(self, other: "MatPolyPath") -> "MatPolyPath":
        self._check_dim(other)
        return MatPolyPath([
            [self.entries[i][j] + other.entries[i][j] for j in range(self.dim)] for i in range(self.dim)
        ])

    def __sub__(self, other: "MatPolyPath") -> "MatPolyPath":
        self._check_dim(other)
        return MatPolyPath([
            [self.entries[i][j] - other.entries[i][j] for j in range(self.dim)] for i in range(self.dim)
        ])

    def __neg__(self) -> "MatPolyPath":
        return MatPolyPath([[-entry for entry in row] for row in self.entries])

    def __mul__(self, scalar: Coefficient) -> "MatPolyPath":
        if isinstance(scalar, MatPolyPath):
            return NotImplemented
        factor = to_rational(scalar)
        return MatPolyPath([[entry * factor for entry in row] for row in self.entries])

    __rmul__ = __mul__

    def __matmul__(self, other: "MatPolyPath") -> "MatPolyPath":
        self._check_dim(other)
        d = self.dim
        return MatPolyPath([
            [sum((self.entries[i][k] * other.entries[k][j] for k in range(d)), _poly(0)) for j in range(d)]
            for i in range(d)
        ])

    def commutator(self, other: "MatPolyPath") -> "MatPolyPath":
        return self @ other - other @ self

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, MatPolyPath):
            return NotImplemented
        return self.dim == other.dim and all(
            (self.entries[i][j] - other.entries[i][j]).is_zero for i in range(self.dim) for j in range(self.dim)
        )

    def __hash__(self):
        return hash(tuple(tuple(tuple(entry.all_coeffs()) for entry in row) for row in self.entries))

    # Calculus

    def integrate(self) -> "MatPolyPath":
        """Entrywise antiderivative with value 0 at t = 0."""
        return MatPolyPath([[entry.integrate(T) for entry in row] for row in self.entries])

    def derivative(self) -> "MatPolyPath":
        return MatPolyPath([[entry.diff(T) for entry in row] for row in self.entries])

    def evaluate(self, s: Coefficient) -> sym.Matrix:
        """Exact value of the path at t = s."""
        point = to_rational(s)
        return sym.Matrix(self.dim, self.dim, lambda i, j: self.entries[i][j].eval(point))

    def degree(self) -> int:
        """Largest polynomial degree among the entries; −1 for the zero path."""
        return max((entry.degree() if not entry.is_zero else -1 for row in self.entries for entry in row), default=-1)

    def is_zero(self) -> bool:
        return all(entry.is_zero for row in self.entries for entry in row)

    @property
    def is_scalar(self) -> bool:
        return self.dim == 1

    # Serialization

    def coefficient_rows(self) -> List[List[List[str]]]:
        rows = []
        for row in self.entries:
            rows.append([[rational_text(c) for c in reversed(entry.all_coeffs())] if not entry.is_zero else ["0"]
                         for entry in row])
        return rows

    def to_json(self) -> Dict[str, Any]:
        return {"dim": self.dim, "entries": self.coefficient_rows()}

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "MatPolyPath":
        dim = int(payload["dim"])
        entries = payload["entries"]
        if len(entries) != dim or any(len(row) != dim for row in entries):
            raise DimensionMismatchError(f"Path JSON declares dim {dim} but holds a different shape")
        return cls.from_coefficients(entries)

    def __repr__(self) -> str:
        return f"MatPolyPath({self.to_json()})"


def matrix_to_json(matrix: sym.Matrix) -> Dict[str, Any]:
    """Exact matrices serialize as degree-0 paths."""
    return MatPolyPath.from_matrix(matrix).to_json()


def matrix_from_json(payload: Dict[str, Any]) -> sym.Matrix:
    return MatPolyPath.from_json(payload).evaluate(0)


class WeightedRBAdapter:
    """
    WeightedRBAdapter turns polynomial integration R into a dendriform algebra on paths.

    R is a Rota–Baxter operator of weight θ; the weight enters every product formula
    but only θ = 0 is backed by R being the plain antiderivative.
    """

    def __init__(self, theta: Coefficient = 0):
        self.theta = to_rational(theta)

    @staticmethod
    def rb_integral(f: MatPolyPath) -> MatPolyPath:
        return f.integrate()

    def rb_tilde(self, f: MatPolyPath) -> MatPolyPath:
        """R̃ = −θ·id − R."""
        return -(f * self.theta) - f.integrate()

    def prec(self, f: MatPolyPath, g: MatPolyPath) -> MatPolyPath:
        """f ≺ g = f R(g) + θ f g."""
        if self.theta == 0:
            return f @ g.integrate()
        return f @ g.integrate() + (f @ g) * self.theta

    def succ(self, f: MatPolyPath, g: MatPolyPath) -> MatPolyPath:
        """f ≻ g = R(f) g."""
        return f.integrate() @ g

    def star(self, f: MatPolyPath, g: MatPolyPath) -> MatPolyPath:
        return self.prec(f, g) + self.succ(f, g)

    def prelie(self, f: MatPolyPath, g: MatPolyPath) -> MatPolyPath:
        """f ▷ g = [R(f), g] − θ g f."""
        if self.theta == 0:
            return f.integrate().commutator(g)
        return f.integrate().commutator(g) - (g @ f) * self.theta

    def rb_residual(self, f: MatPolyPath, g: MatPolyPath) -> MatPolyPath:
        """R(f)R(g) − R(R(f)g + fR(g) + θfg); zero for a Rota–Baxter operator."""
        return f.integrate() @ g.integrate() - self.star(f, g).integrate()


# A(t) = [[0, 1], [−1 − t, 0]]
DEFAULT_PATH_JSON = {"dim": 2, "entries": [[["0"], ["1"]], [["-1", "-1"], ["0"]]]}


def default_path() -> MatPolyPath:
    return MatPolyPath.from_json(DEFAULT_PATH_JSON)


def load_path(source: str) -> MatPolyPath:
    """
    Reads a path from a JSON file, or returns the built-in default for 'default'.

    Raises:
        PathFormatError: If the file is missing or does not hold a valid path.
    """
    if source == "default":
        return default_path()
    try:
        with open(source, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
        return MatPolyPath.from_json(payload)
    except DimensionMismatchError:
        raise
    except (OSError, KeyError, TypeError, ValueError, sym.SympifyError) as e:
        raise PathFormatError(f"Cannot read a path from '{source}': {e}") from e
