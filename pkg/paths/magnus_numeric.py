import math
import multiprocessing as mp
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sym

from dendriform.flows import FormalFlows
from dendriform.magnus import fixpoint_log_coefficient
from dendriform.tree_series import TreeSeries
from forest.rooted_tree import RootedTree, decompose, enumerate_rooted
from paths.linalg import inf_norm, matrix_exp, to_float_matrix
from paths.mat_poly_path import MatPolyPath, WeightedRBAdapter, to_rational
from paths.simplex import perm_integral_path
from shuffle.level_maps import mps_coefficient
from shuffle.permutation import Permutation, enumerate_permutations
from utilities.exceptions import AugmentationError, ConfigurationError, DegreeError, TruncationMismatchError
from utilities.utils import Utils

THREADS_ENV = "MAGNUS_FOREST_THREADS"
DEFAULT_SCAN_POINTS = (Fraction(1, 4), Fraction(1, 8), Fraction(1, 16))
REFERENCE_EXTRA_LEVELS = 6


def resolve_workers(requested: int) -> int:
    """
    Worker count for the permutation route.

    Args:
        requested (int): Workers asked for; values below 1 mean sequential.

    Returns:
        int: requested, capped by MAGNUS_FOREST_THREADS or else the CPU count.

    Raises:
        ConfigurationError: If MAGNUS_FOREST_THREADS is set but is not a positive integer.
    """
    value = os.environ.get(THREADS_ENV)
    if value:
        try:
            cap = int(value)
        except ValueError:
            raise ConfigurationError(f"{THREADS_ENV} must be an integer, got '{value}'") from None
        if cap < 1:
            raise ConfigurationError(f"{THREADS_ENV} must be at least 1, got {cap}")
    else:
        cap = os.cpu_count() or 1
    return max(1, min(requested, cap))


def _perm_integral_job(job: Tuple[dict, Tuple[int, ...]]) -> dict:
    path_json, word = job
    return perm_integral_path(Permutation(word), MatPolyPath.from_json(path_json)).to_json()


def right_nested_words(word: Sequence[int]) -> List[Tuple[Tuple[int, ...], int]]:
    """Expansion of [x₁,[x₂,…[xₙ₋₁,xₙ]…]] into signed words."""
    if len(word) == 1:
        return [(tuple(word), 1)]
    head = word[0]
    expanded = []
    for tail, sign in right_nested_words(word[1:]):
        expanded.append(((head,) + tail, sign))
        expanded.append((tail + (head,), -sign))
    return expanded


class GradedPath:
    """
    Element of the path algebra graded by the number of factors of the generator.

    Degree-n parts are polynomial paths; degree 0 is never stored, so every
    GradedPath lies in the augmentation ideal.
    """

    def __init__(self, trunc: int, parts: Dict[int, MatPolyPath], dim: int):
        if any(degree < 1 for degree in parts):
            raise AugmentationError("GradedPath parts start at degree 1")
        self.trunc = trunc
        self.dim = dim
        self.parts = {degree: part for degree, part in parts.items() if degree <= trunc and not part.is_zero()}

    @property
    def constant_term(self) -> int:
        return 0

    def zero_like(self) -> "GradedPath":
        return GradedPath(self.trunc, {}, self.dim)

    def _check(self, other: "GradedPath") -> None:
        if other.trunc != self.trunc:
            raise TruncationMismatchError(f"Truncation degrees differ: {self.trunc} vs {other.trunc}")

    def __add__(self, other: "GradedPath") -> "GradedPath":
        self._check(other)
        parts = dict(self.parts)
        for degree, part in other.parts.items():
            parts[degree] = parts[degree] + part if degree in parts else part
        return GradedPath(self.trunc, parts, self.dim)

    def __neg__(self) -> "GradedPath":
        return GradedPath(self.trunc, {degree: -part for degree, part in self.parts.items()}, self.dim)

    def __sub__(self, other: "GradedPath") -> "GradedPath":
        return self + (-other)

    def __mul__(self, scalar) -> "GradedPath":
        return GradedPath(self.trunc, {degree: part * scalar for degree, part in self.parts.items()}, self.dim)

    __rmul__ = __mul__

    def part(self, degree: int) -> MatPolyPath:
        return self.parts.get(degree, MatPolyPath.zero(self.dim))


def graded_product(product):
    """Lifts a bilinear path product to GradedPath, dropping degrees above the truncation."""
    def lifted(x: GradedPath, y: GradedPath) -> GradedPath:
        x._check(y)
        parts: Dict[int, MatPolyPath] = {}
        for i, left in x.parts.items():
            for j, right in y.parts.items():
                if i + j > x.trunc:
                    continue
                value = product(left, right)
                parts[i + j] = parts[i + j] + value if i + j in parts else value
        return GradedPath(x.trunc, parts, x.dim)
    return lifted


@dataclass(frozen=True)
class ScanPoint:
    s: Fraction
    residual: float
    order: Optional[float]


class MagnusRoutes:
    """
    MagnusRoutes computes the Magnus expansion of Ż = A(t)Z for one polynomial path A
    along three independent routes, plus the reference solution and consistency checks.

    Every route first produces per-degree components as polynomial paths in the upper
    bound, so that routes can be compared exactly before evaluating at s.
    """

    def __init__(self, a: MatPolyPath, workers: int = 1, mirrored_evaluation: bool = False):
        """
        Initializes the routes for a path.

        Args:
            a (MatPolyPath): The coefficient path A(t).
            workers (int): Process count for the permutation route; 1 runs sequentially.
            mirrored_evaluation (bool): Use E(t₁↘t₂) = E(t₂)≻(a≺E(t₁)) instead of the
                normative recursion. Only the convention check should set this.
        """
        self.a = a
        self.workers = resolve_workers(workers)
        self.mirrored_evaluation = mirrored_evaluation
        self.adapter = WeightedRBAdapter(0)
        self.logger = Utils.custom_logger(__name__)
        self._tree_paths: Dict[RootedTree, MatPolyPath] = {}
        self._perm_paths: Dict[Permutation, MatPolyPath] = {}

    @staticmethod
    def _require_degree(name: str, n: int) -> None:
        if n < 1:
            raise DegreeError(f"{name} needs N >= 1, got {n}")

    def identity(self) -> MatPolyPath:
        return MatPolyPath.identity(self.a.dim)

    @staticmethod
    def _at(components: Dict[int, MatPolyPath], s, dim: int) -> sym.Matrix:
        total = MatPolyPath.zero(dim)
        for degree in sorted(components):
            total = total + components[degree]
        return total.evaluate(s)

    # Tree route

    def eval_tree_path(self, tau: RootedTree) -> MatPolyPath:
        """
        Dendriform morphism from rooted trees to paths sending ℓ⁽¹⁾ to a.

        E(•) = 1 and E(t₁↘t₂) = (E(t₁)≻a)≺E(t₂), with the unit rules 1≻a = a and x≺1 = x.
        """
        if tau.is_vertex:
            return self.identity()
        if tau in self._tree_paths:
            return self._tree_paths[tau]
        t1, t2 = decompose(tau)
        if self.mirrored_evaluation:
            inner = self.a if t1.is_vertex else self.adapter.prec(self.a, self.eval_tree_path(t1))
            value = inner if t2.is_vertex else self.adapter.succ(self.eval_tree_path(t2), inner)
        else:
            inner = self.a if t1.is_vertex else self.adapter.succ(self.eval_tree_path(t1), self.a)
            value = inner if t2.is_vertex else self.adapter.prec(inner, self.eval_tree_path(t2))
        self._tree_paths[tau] = value
        return value

    def eval_tree_series(self, x: TreeSeries) -> MatPolyPath:
        """
        Linear extension of eval_tree_path to a tree series.

        Args:
            x (TreeSeries): Series of rooted trees; the empty tree maps to the identity.

        Returns:
            MatPolyPath: Σ c(τ)·E(τ).
        """
        total = MatPolyPath.zero(self.a.dim)
        for tau, coefficient in x:
            total = total + self.eval_tree_path(tau) * coefficient
        return total

    def closed_tree_components(self, trunc: int) -> Dict[int, MatPolyPath]:
        """Degree n ↦ Σ_{|τ|=n} c(τ)·R(E(τ)) with the fixpoint-log coefficients."""
        self._require_degree("closed_tree_omega", trunc)
        components = {}
        for n in range(1, trunc + 1):
            total = MatPolyPath.zero(self.a.dim)
            for tau in enumerate_rooted(n):
                total = total + self.eval_tree_path(tau) * fixpoint_log_coefficient(tau)
            components[n] = total.integrate()
        return components

    def closed_tree_omega(self, trunc: int, s) -> sym.Matrix:
        """
        Ω_N(s) from the closed tree coefficients.

        Args:
            trunc (int): Truncation N >= 1.
            s: Upper bound, a rational or 'p/q' string.

        Returns:
            sym.Matrix: Exact value at s.
        """
        return self._at(self.closed_tree_components(trunc), s, self.a.dim)

    # Pre-Lie route

    def prelie_components(self, trunc: int) -> Dict[int, MatPolyPath]:
        """Degree n ↦ R(Ω′ₙ) for the pre-Lie Magnus element of the path algebra."""
        self._require_degree("prelie_omega_numeric", trunc)
        generator = GradedPath(trunc, {1: self.a}, self.a.dim)
        omega = FormalFlows(graded_product(self.adapter.prelie)).prelie_magnus(generator)
        return {n: omega.part(n).integrate() for n in range(1, trunc + 1)}

    def prelie_omega_numeric(self, trunc: int, s) -> sym.Matrix:
        """Ω_N(s) from the pre-Lie Magnus recursion in the path algebra; exact."""
        return self._at(self.prelie_components(trunc), s, self.a.dim)

    # Permutation route

    def perm_integral(self, sigma: Permutation) -> MatPolyPath:
        """
        Cached simplex integral of a(u_σ1)⋯a(u_σn) as a path in the upper bound.

        Args:
            sigma (Permutation): Ordering of the integration variables.

        Returns:
            MatPolyPath: The integral over 0 < uₙ < … < u₁ < t.
        """
        if sigma not in self._perm_paths:
            self._perm_paths[sigma] = perm_integral_path(sigma, self.a)
        return self._perm_paths[sigma]

    def _perm_integrals(self, n: int) -> List[Tuple[Permutation, MatPolyPath]]:
        perms = enumerate_permutations(n)
        missing = [sigma for sigma in perms if sigma not in self._perm_paths]
        if self.workers > 1 and len(missing) > 1:
            self.logger.debug(f"Integrating {len(missing)} permutations of S_{n} on {self.workers} workers")
            payload = self.a.to_json()
            with mp.Pool(processes=self.workers) as pool:
                results = pool.map(_perm_integral_job, [(payload, sigma.word) for sigma in missing])
            for sigma, result in zip(missing, results):
                self._perm_paths[sigma] = MatPolyPath.from_json(result)
        return [(sigma, self.perm_integral(sigma)) for sigma in perms]

    def mps_components(self, trunc: int) -> Dict[int, MatPolyPath]:
        """Degree n ↦ Σ_{σ∈Sₙ} (−1)^{d(σ)}/(n·binom(n−1,d(σ))) ∫_{Δₙ} a(u_{σ1})⋯a(u_{σn})."""
        self._require_degree("mps_omega", trunc)
        components = {}
        for n in range(1, trunc + 1):
            total = MatPolyPath.zero(self.a.dim)
            for sigma, integral in self._perm_integrals(n):
                total = total + integral * mps_coefficient(sigma)
            components[n] = total
        self.logger.debug(f"Permutation route computed up to degree {trunc}")
        return components

    def mps_omega(self, trunc: int, s) -> sym.Matrix:
        """
        Ω_N(s) from the permutation coefficients.

        Args:
            trunc (int): Truncation N >= 1.
            s: Upper bound.

        Returns:
            sym.Matrix: Exact value at s.

        Raises:
            DegreeError: If trunc < 1.
        """
        return self._at(self.mps_components(trunc), s, self.a.dim)

    # Reference solution and checks

    def chen_path(self, levels: int) -> MatPolyPath:
        """1 + R(a) + R(aR(a)) + … with the given number of nested levels."""
        self._require_degree("chen_reference", levels)
        term = self.identity()
        total = self.identity()
        for _ in range(levels):
            term = (self.a @ term).integrate()
            total = total + term
        return total

    def chen_reference(self, levels: int, s) -> sym.Matrix:
        """
        Chen series of the solution Z(s), truncated after the given number of levels.

        Args:
            levels (int): Nested integrals kept, >= 1.
            s: Upper bound.

        Returns:
            sym.Matrix: Exact value at s.
        """
        return self.chen_path(levels).evaluate(s)

    def magnus_classical_terms(self) -> Dict[int, MatPolyPath]:
        """
        Degree-2 and degree-3 terms of the classical Magnus series as paths in the upper bound.

        Returns:
            Dict[int, MatPolyPath]: {2: −½ R([R(a), a]),
            3: ¼ R([R([R(a), a]), a]) + 1/12 R([R(a), [R(a), a]])}.
        """
        ra = self.a.integrate()
        inner = ra.commutator(self.a)
        second = inner.integrate() * Fraction(-1, 2)
        third = (
            inner.integrate().commutator(self.a).integrate() * Fraction(1, 4)
            + ra.commutator(inner).integrate() * Fraction(1, 12)
        )
        return {2: second, 3: third}

    def dsw_check(self, n: int, s) -> Tuple[sym.Matrix, sym.Matrix]:
        """
        Degree-n Magnus term against its right-nested bracket form.

        Args:
            n (int): Degree, 2 ≤ n ≤ 5.
            s: Upper bound.

        Returns:
            Tuple[sym.Matrix, sym.Matrix]: (Σ_σ c(σ)∫a(u_σ1)⋯a(u_σn),
            Σ_σ c(σ)/n ∫[a(u_σ1),[…,a(u_σn)]]).
        """
        if not 2 <= n <= 5:
            raise DegreeError(f"dsw_check needs 2 <= n <= 5, got {n}")
        words = self.mps_components(n)[n]
        brackets = MatPolyPath.zero(self.a.dim)
        for sigma in enumerate_permutations(n):
            coefficient = mps_coefficient(sigma) / n
            for word, sign in right_nested_words(sigma.word):
                brackets = brackets + self.perm_integral(Permutation(word)) * (sign * coefficient)
        return words.evaluate(s), brackets.evaluate(s)

    def spitzer_check(self, trunc: int, s) -> float:
        """‖chen_reference(N, s) − exp(mps_omega(N, s))‖∞."""
        reference = to_float_matrix(self.chen_reference(trunc, s))
        return inf_norm(reference - matrix_exp(self.mps_omega(trunc, s)))

    def ode_residual(self, trunc: int, s, extra_levels: int = REFERENCE_EXTRA_LEVELS) -> float:
        """‖exp(Ω_N(s)) − Z_ref(s)‖∞ with Z_ref the Chen series to N + extra_levels levels."""
        reference = to_float_matrix(self.chen_reference(trunc + extra_levels, s))
        return inf_norm(matrix_exp(self.mps_omega(trunc, s)) - reference)

    def order_scan(self, trunc: int, points: Sequence = DEFAULT_SCAN_POINTS,
                   reference_levels: Optional[int] = REFERENCE_EXTRA_LEVELS) -> List[ScanPoint]:
        """
        Residuals at decreasing s and the measured order between consecutive points.

        Args:
            trunc (int): Magnus truncation N.
            points (Sequence): Upper bounds, each smaller than the previous one.
            reference_levels (int, optional): Extra Chen levels of the reference; None compares
                against the Chen series truncated at N levels (the Spitzer residual).

        Returns:
            List[ScanPoint]: One entry per point; the first has no order.
        """
        scan: List[ScanPoint] = []
        for point in points:
            s = to_rational(point)
            if reference_levels is None:
                residual = self.spitzer_check(trunc, s)
            else:
                residual = self.ode_residual(trunc, s, reference_levels)
            order = None
            if scan and residual > 0 and scan[-1].residual > 0:
                previous = scan[-1]
                order = math.log(previous.residual / residual) / math.log(float(previous.s) / float(s))
            scan.append(ScanPoint(Fraction(int(s.p), int(s.q)), residual, order))
        self.logger.info(f"Order scan at N={trunc}: {[p.order for p in scan]}")
        return scan

    def check_evaluation_convention(self, trunc: int = 3) -> Tuple[bool, str]:
        """
        Compares the closed tree route with the permutation route degree by degree.

        Returns:
            Tuple[bool, str]: Whether they agree, and a message naming the first failing degree.
        """
        closed = self.closed_tree_components(trunc)
        reference = self.mps_components(trunc)
        for n in range(1, trunc + 1):
            if closed[n] != reference[n]:
                message = (
                    f"closed tree route differs from the permutation route at degree {n}; "
                    "the evaluation E(t1↘t2) = (E(t1)≻a)≺E(t2) may need the mirrored "
                    "recursion E(t1↘t2) = E(t2)≻(a≺E(t1))"
                )
                self.logger.error(message)
                return False, message
        return True, f"closed tree and permutation routes agree up to degree {trunc}"
