from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, factorial
from typing import Callable, Dict, Iterable, List, Tuple

from base.dendriform_laws import dendriform_axiom_residuals, prelie_residual
from dendriform.binary_products import binary_prec, binary_star, binary_succ
from dendriform.flows import FormalFlows
from dendriform.magnus import (
    beta_coefficient,
    closed_magnus_series,
    descent_magnus_coefficient,
    fixpoint_log_series,
    ladder_log_by_compositions,
    ladder_log_oracle,
    ladder_monomial,
    magnus_coefficient,
    prelie_magnus_series,
)
from dendriform.tree_series import SplitConvention, TreeDendriform
from forest.binary_tree import descent_count, enumerate_binary
from forest.composition import compositions
from forest.correspondence import rotate
from forest.leveled import level_assignments
from forest.rooted_tree import corolla, enumerate_rooted, leaf_count, tree_composition
from paths.mat_poly_path import MatPolyPath, WeightedRBAdapter
from paths.magnus_numeric import MagnusRoutes
from shuffle.level_maps import leveled_to_perm, mps_coefficient, perm_to_leveled, psi, psi_star
from shuffle.perm_series import PermDendriform
from shuffle.permutation import descent_count_perm, enumerate_permutations, shuffle_set
from utilities.exceptions import UnitHalfProductError
from utilities.utils import Utils

SUITE_ORDER = ("axioms", "theorem", "psi", "numeric", "flows")
# Triple and pair enumerations stay below these degrees
AXIOM_DEGREE_LIMIT = 6
PERMUTATION_AXIOM_LIMIT = 5
MORPHISM_DEGREE_LIMIT = 5
NUMERIC_MORPHISM_LIMIT = 4
DSW_DEGREE_LIMIT = 4
ORDER_SCAN_DEGREES = (3, 4)
ORDER_TOLERANCE = 0.3


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    counterexample: str = ""


def first_failure(name: str, cases: Iterable, predicate: Callable, describe: Callable = str) -> CheckResult:
    """Runs predicate over cases and reports the first case where it is false."""
    for case in cases:
        if not predicate(case):
            return CheckResult(name, False, describe(case))
    return CheckResult(name, True)


def series_difference(left, right) -> str:
    """Text of the first basis element where two series disagree."""
    for key, coefficient in left - right:
        return f"{left.key_to_text(key)}: {left.coefficient(key)} != {right.coefficient(key)}"
    return ""


def compare_series(name: str, left, right) -> CheckResult:
    difference = series_difference(left, right)
    return CheckResult(name, not difference, difference)


def _graded_trees(enumerate_fn, low: int, high: int) -> List:
    return [tree for n in range(low, high + 1) for tree in enumerate_fn(n)]


def _triples(trees: List, limit: int) -> Iterable[Tuple]:
    return (
        (x, y, z) for x, y, z in product(trees, repeat=3) if x.degree + y.degree + z.degree <= limit
    )


def _pairs(trees: List, limit: int) -> Iterable[Tuple]:
    return ((x, y) for x, y in product(trees, repeat=2) if x.degree + y.degree <= limit)


class VerificationSuites:
    """
    VerificationSuites bundles the invariant checks behind ``verify``.

    Each suite returns one CheckResult per property; a failing result carries the
    first counterexample found in canonical enumeration order.
    """

    def __init__(self, degree: int, path: MatPolyPath, workers: int = 1):
        self.degree = degree
        self.path = path
        self.workers = workers
        self.logger = Utils.custom_logger(__name__)

    def run(self, suite: str) -> List[CheckResult]:
        names = SUITE_ORDER if suite == "all" else (suite,)
        results: List[CheckResult] = []
        for name in names:
            self.logger.info(f"Running suite '{name}' to degree {self.degree}")
            results.extend(getattr(self, name)())
        failed = [result.name for result in results if not result.passed]
        if failed:
            self.logger.warning(f"Failed checks: {failed}")
        return results

    # Axioms

    def axioms(self) -> List[CheckResult]:
        limit = min(self.degree, AXIOM_DEGREE_LIMIT)
        algebra = TreeDendriform(limit)
        trees = _graded_trees(enumerate_rooted, 1, max(limit - 2, 1))

        def axioms_hold(triple) -> bool:
            x, y, z = (algebra.tree(t) for t in triple)
            return all(r.is_zero() for r in dendriform_axiom_residuals(algebra.prec, algebra.succ, x, y, z))

        def prelie_holds(triple) -> bool:
            x, y, z = (algebra.tree(t) for t in triple)
            return prelie_residual(algebra.prelie, x, y, z).is_zero()

        def describe(triple) -> str:
            return "(" + ", ".join(t.render() for t in triple) + ")"

        results = [
            first_failure("tree dendriform axioms", _triples(trees, limit), axioms_hold, describe),
            first_failure("tree pre-Lie identity", _triples(trees, limit), prelie_holds, describe),
            self._unit_rules(algebra),
            self._second_term_split_breaks_first_axiom(),
            self._permutation_axioms(),
            self._path_axioms(),
        ]
        return results

    def _unit_rules(self, algebra: TreeDendriform) -> CheckResult:
        unit = algebra.unit()
        for tau in _graded_trees(enumerate_rooted, 1, algebra.trunc):
            x = algebra.tree(tau)
            if not (algebra.prec(x, unit) == x and algebra.succ(unit, x) == x
                    and algebra.prec(unit, x).is_zero() and algebra.succ(x, unit).is_zero()):
                return CheckResult("unit rules", False, tau.render())
        try:
            algebra.prec(unit, unit)
        except UnitHalfProductError:
            return CheckResult("unit rules", True)
        return CheckResult("unit rules", False, "1 ≺ 1 did not raise")

    def _second_term_split_breaks_first_axiom(self) -> CheckResult:
        name = "second-term split breaks (A1) at (a, a, a)"
        algebra = TreeDendriform(3, SplitConvention.SECOND_TERM_PREC)
        a = algebra.generator()
        first, _, _ = dendriform_axiom_residuals(algebra.prec, algebra.succ, a, a, a)
        return CheckResult(name, not first.is_zero(), "" if not first.is_zero() else "residual vanished")

    def _permutation_axioms(self) -> CheckResult:
        limit = min(self.degree, PERMUTATION_AXIOM_LIMIT)
        algebra = PermDendriform(limit)
        perms = _graded_trees(enumerate_permutations, 1, max(limit - 2, 1))

        def holds(triple) -> bool:
            x, y, z = (algebra.perm(p) for p in triple)
            return all(r.is_zero() for r in dendriform_axiom_residuals(algebra.prec, algebra.succ, x, y, z))

        cases = ((x, y, z) for x, y, z in product(perms, repeat=3) if x.n + y.n + z.n <= limit)
        return first_failure("permutation dendriform axioms", cases, holds,
                             lambda triple: "(" + ", ".join(p.render() for p in triple) + ")")

    def _path_axioms(self) -> CheckResult:
        adapter = WeightedRBAdapter(0)
        a = self.path
        samples = (a, a.integrate() + MatPolyPath.identity(a.dim), a @ a)
        residuals = list(dendriform_axiom_residuals(adapter.prec, adapter.succ, *samples))
        residuals.append(adapter.rb_residual(samples[0], samples[2]))
        for index, residual in enumerate(residuals):
            if not residual.is_zero():
                return CheckResult("path dendriform axioms and Rota-Baxter identity", False, f"identity {index + 1}")
        return CheckResult("path dendriform axioms and Rota-Baxter identity", True)

    # Closed formula

    def theorem(self) -> List[CheckResult]:
        n_max = self.degree
        algebra = TreeDendriform(n_max)
        oracle = ladder_log_oracle(n_max)
        fixpoint_log = algebra.log_star(algebra.solve_left_fixpoint(algebra.generator()))
        trees = _graded_trees(enumerate_rooted, 1, n_max)
        results = [
            compare_series("closed formula equals log of the ladder sum", closed_magnus_series(n_max), oracle),
            compare_series("composition form of the ladder logarithm", ladder_log_by_compositions(n_max), oracle),
            compare_series("closed formula for the log of the left fixpoint", fixpoint_log_series(n_max), fixpoint_log),
            compare_series("pre-Lie Magnus equals log of the left fixpoint",
                           prelie_magnus_series(algebra.generator(), algebra), fixpoint_log),
            first_failure("beta-integral form of the coefficients", trees,
                          lambda tau: beta_coefficient(tau.degree, leaf_count(tau)) == magnus_coefficient(tau),
                          lambda tau: tau.render()),
            first_failure("descent form on binary trees", _graded_trees(enumerate_binary, 1, n_max),
                          lambda t: descent_magnus_coefficient(t) == magnus_coefficient(rotate(t)),
                          lambda t: t.render()),
            self._unique_monomials(algebra, trees),
        ]
        if n_max >= 3:
            results.append(self._second_term_split_breaks_theorem())
        return results

    @staticmethod
    def _unique_monomials(algebra: TreeDendriform, trees: List) -> CheckResult:
        name = "ladder monomials: 0/1 coefficients, unique coarsest composition"
        monomials: Dict = {}
        for tau in trees:
            own = tree_composition(tau)
            for composition in compositions(tau.degree):
                if composition not in monomials:
                    monomials[composition] = ladder_monomial(composition, algebra)
                coefficient = monomials[composition].coefficient(tau)
                if coefficient not in (0, 1):
                    return CheckResult(name, False, f"{tau.render()} in {composition}: {coefficient}")
                if composition == own and coefficient != 1:
                    return CheckResult(name, False, f"{tau.render()} missing from {composition}")
                if coefficient and not _refines(composition.parts, own.parts):
                    return CheckResult(name, False, f"{tau.render()} in coarser {composition}")
        return CheckResult(name, True)

    def _second_term_split_breaks_theorem(self) -> CheckResult:
        algebra = TreeDendriform(3, SplitConvention.SECOND_TERM_PREC)
        a = algebra.generator()
        log_side = algebra.log_star(algebra.solve_left_fixpoint(a))
        prelie_side = prelie_magnus_series(a, algebra)
        differs = log_side.homogeneous(3) != prelie_side.homogeneous(3)
        return CheckResult("second-term split breaks the logarithm identity at degree 3", differs,
                           "" if differs else "degree-3 parts agree")

    # Permutations

    def psi(self) -> List[CheckResult]:
        n_max = self.degree
        perms = _graded_trees(enumerate_permutations, 1, n_max)
        binaries = _graded_trees(enumerate_binary, 1, n_max)
        results = [
            first_failure("leveled tree round trip", perms,
                          lambda sigma: leveled_to_perm(perm_to_leveled(sigma)) == sigma),
            first_failure("descents preserved by psi", perms,
                          lambda sigma: descent_count_perm(sigma) == descent_count(psi(sigma))),
            self._fiber_sizes(n_max),
            first_failure("permutation coefficients follow the tree coefficients", perms,
                          lambda sigma: mps_coefficient(sigma) == descent_magnus_coefficient(psi(sigma))),
            first_failure("permutation coefficients sum to zero", range(2, n_max + 1),
                          lambda n: sum(mps_coefficient(s) for s in enumerate_permutations(n)) == 0),
            first_failure("shuffle set sizes", [(n, m) for n in range(1, n_max) for m in range(1, n_max - n + 1)],
                          lambda nm: len(shuffle_set(nm[0], nm[1], "sh1")) == comb(nm[0] + nm[1] - 1, nm[0])
                          and len(shuffle_set(nm[0], nm[1], "all")) == comb(nm[0] + nm[1], nm[0])),
        ]
        limit = min(n_max, MORPHISM_DEGREE_LIMIT)
        results.append(self._psi_star_morphism(binaries, limit))
        return results

    @staticmethod
    def _fiber_sizes(n_max: int) -> CheckResult:
        name = "fiber sizes of psi"
        for n in range(1, n_max + 1):
            counts: Dict = {}
            for sigma in enumerate_permutations(n):
                tree = psi(sigma)
                counts[tree] = counts.get(tree, 0) + 1
            if sum(counts.values()) != factorial(n):
                return CheckResult(name, False, f"degree {n}")
            for tree in enumerate_binary(n):
                if counts.get(tree, 0) != sum(1 for _ in level_assignments(tree)):
                    return CheckResult(name, False, tree.render())
        return CheckResult(name, True)

    @staticmethod
    def _psi_star_morphism(binaries: List, limit: int) -> CheckResult:
        name = "psi* is a dendriform morphism"
        algebra = PermDendriform(limit)
        products = (("≺", binary_prec, algebra.prec), ("≻", binary_succ, algebra.succ),
                    ("⋆", lambda s, t, *_: binary_star(s, t), algebra.star))
        for s, t in _pairs([b for b in binaries if b.degree <= limit], limit):
            for symbol, tree_product, perm_product in products:
                image = algebra.series()
                for tree, coefficient in tree_product(s, t).items():
                    image = image + coefficient * psi_star(tree, limit)
                if image != perm_product(psi_star(s, limit), psi_star(t, limit)):
                    return CheckResult(name, False, f"{s.render()} {symbol} {t.render()}")
        return CheckResult(name, True)

    # Numeric routes

    def numeric(self) -> List[CheckResult]:
        n_max = self.degree
        routes = MagnusRoutes(self.path, self.workers)
        mps = routes.mps_components(n_max)
        closed = routes.closed_tree_components(n_max)
        prelie = routes.prelie_components(n_max)
        agree = next((n for n in range(1, n_max + 1) if not (mps[n] == closed[n] == prelie[n])), None)
        convention_ok, convention_message = routes.check_evaluation_convention(min(n_max, 3))
        results = [
            CheckResult("three Magnus routes agree per degree", agree is None,
                        "" if agree is None else f"degree {agree}"),
            CheckResult("tree evaluation convention", convention_ok, "" if convention_ok else convention_message),
            self._evaluation_morphism(routes, min(n_max, NUMERIC_MORPHISM_LIMIT)),
            self._commuting_collapse(n_max),
        ]
        if n_max >= 2:
            classical = routes.magnus_classical_terms()
            bad = next((n for n in classical if n <= n_max and classical[n] != mps[n]), None)
            results.append(CheckResult("classical second and third terms", bad is None,
                                       "" if bad is None else f"degree {bad}"))
            results.append(first_failure(
                "Dynkin-Specht-Wever bracket form", range(2, min(n_max, DSW_DEGREE_LIMIT) + 1),
                lambda n: _equal_pair(routes.dsw_check(n, Fraction(1, 4))), lambda n: f"degree {n}"))
        scan_degrees = [n for n in ORDER_SCAN_DEGREES if n <= n_max] or [n_max]
        results.extend(self._order_checks(routes, n) for n in scan_degrees)
        return results

    @staticmethod
    def _evaluation_morphism(routes: MagnusRoutes, limit: int) -> CheckResult:
        name = "tree evaluation is a dendriform morphism"
        algebra = TreeDendriform(limit)
        adapter = routes.adapter
        products = (("≺", algebra.prec, adapter.prec), ("≻", algebra.succ, adapter.succ),
                    ("⋆", algebra.star, adapter.star))
        trees = _graded_trees(enumerate_rooted, 1, limit - 1) if limit > 1 else []
        for s, t in _pairs(trees, limit):
            for symbol, tree_product, path_product in products:
                left = routes.eval_tree_series(tree_product(algebra.tree(s), algebra.tree(t)))
                right = path_product(routes.eval_tree_path(s), routes.eval_tree_path(t))
                if left != right:
                    return CheckResult(name, False, f"{s.render()} {symbol} {t.render()}")
        return CheckResult(name, True)

    @staticmethod
    def _commuting_collapse(n_max: int) -> CheckResult:
        scalar = MatPolyPath.from_coefficients([[["1", "1"]]])
        routes = MagnusRoutes(scalar)
        expected = scalar.integrate()
        for components in (routes.mps_components(n_max), routes.closed_tree_components(n_max),
                           routes.prelie_components(n_max)):
            total = MatPolyPath.zero(1)
            for n in sorted(components):
                total = total + components[n]
            if total != expected:
                return CheckResult("scalar paths collapse to the integral", False, str(total.to_json()))
        return CheckResult("scalar paths collapse to the integral", True)

    @staticmethod
    def _order_checks(routes: MagnusRoutes, n: int) -> CheckResult:
        name = f"order of accuracy at N={n}"
        reference_orders = [p.order for p in routes.order_scan(n) if p.order is not None]
        spitzer_orders = [p.order for p in routes.order_scan(n, reference_levels=None) if p.order is not None]
        if any(order < n + 1 - ORDER_TOLERANCE for order in reference_orders):
            return CheckResult(name, False, f"ODE residual orders {reference_orders}")
        if any(abs(order - (n + 1)) > ORDER_TOLERANCE for order in spitzer_orders):
            return CheckResult(name, False, f"Spitzer residual orders {spitzer_orders}")
        return CheckResult(name, True)

    # Formal flows

    def flows(self) -> List[CheckResult]:
        algebra = TreeDendriform(self.degree)
        flows = FormalFlows(algebra.prelie)
        a1 = algebra.generator()
        a2 = algebra.tree(corolla(2)) if self.degree >= 2 else a1
        b = a1 + a2
        left_fixpoint = algebra.solve_left_fixpoint
        results = [
            compare_series("W inverts the flow logarithm", flows.flow_w(flows.flow_omega(b)), b),
            compare_series("flow logarithm inverts W", flows.flow_omega(flows.flow_w(b)), b),
            compare_series("pre-Lie Magnus is the inverse of W", flows.prelie_magnus(b), flows.flow_omega(b)),
            compare_series("sharp inverse", flows.sharp(b, flows.sharp_inverse(b)), algebra.series()),
            compare_series("flow factorisation of two fixpoints",
                           algebra.star(left_fixpoint(a1), left_fixpoint(a2)),
                           left_fixpoint(flows.sharp(a1, a2))),
            compare_series("flow factorisation of three fixpoints",
                           algebra.star(algebra.star(left_fixpoint(a1), left_fixpoint(a2)), left_fixpoint(a1)),
                           left_fixpoint(flows.sharp_many(a1, a2, a1))),
            compare_series("right fixpoint of -a inverts the left fixpoint",
                           algebra.star(left_fixpoint(a1), algebra.solve_right_fixpoint(-a1)), algebra.unit()),
        ]
        associative = FormalFlows(algebra.star)
        results.append(compare_series("associative sharp product", associative.sharp(a1, a2),
                                      a1 + a2 + algebra.star(a1, a2)))
        alternating = algebra.series()
        for k in range(1, self.degree + 1):
            alternating = alternating + (-1) ** k * algebra.power(a1, k)
        results.append(compare_series("associative sharp inverse", associative.sharp_inverse(a1), alternating))
        return results


def _refines(finer: Tuple[int, ...], coarser: Tuple[int, ...]) -> bool:
    """Whether the composition ``finer`` splits every part of ``coarser``."""
    position = 0
    for part in coarser:
        total = 0
        while total < part and position < len(finer):
            total += finer[position]
            position += 1
        if total != part:
            return False
    return position == len(finer)


def _equal_pair(pair: Tuple) -> bool:
    left, right = pair
    return left == right
