import os
from typing import List

from cli.config import (
    MAGNUS_DEGREE_CAP,
    PERMUTATION_DEGREE_CAP,
    TREE_DEGREE_CAP,
    CommandConfig,
)
from cli.formatting import CommandOutput, Table
from cli.suites import VerificationSuites
from dendriform.magnus import descent_magnus_coefficient, fixpoint_log_coefficient, magnus_coefficient
from forest.binary_tree import descent_count, enumerate_binary
from forest.correspondence import enumerate_trees, rotate, unrotate
from forest.rooted_tree import enumerate_rooted, leaf_count
from paths.linalg import inf_norm, matrix_exp, to_float_matrix
from paths.magnus_numeric import REFERENCE_EXTRA_LEVELS, MagnusRoutes, resolve_workers
from paths.mat_poly_path import load_path, matrix_to_json
from shuffle.level_maps import mps_coefficient
from shuffle.permutation import descent_count_perm, enumerate_permutations
from utilities.exceptions import ResourceCapError
from utilities.utils import Utils

logger = Utils.custom_logger(__name__)

SUITE_CAPS = {
    "axioms": TREE_DEGREE_CAP,
    "theorem": TREE_DEGREE_CAP,
    "flows": TREE_DEGREE_CAP,
    "psi": PERMUTATION_DEGREE_CAP,
    "numeric": MAGNUS_DEGREE_CAP,
    "all": MAGNUS_DEGREE_CAP,
}


def _workers(config: CommandConfig) -> int:
    return resolve_workers(os.cpu_count() or 1) if config.parallel else 1


def enforce_cap(config: CommandConfig, cap: int, what: str) -> None:
    """
    Raises:
        ResourceCapError: If the degree exceeds the cap and --unsafe-degree is not set.
    """
    if config.degree > cap and not config.unsafe_degree:
        logger.error(f"Degree {config.degree} exceeds the {what} cap {cap}")
        raise ResourceCapError(f"--degree {config.degree} exceeds the {what} cap of {cap}; pass --unsafe-degree")


def cmd_trees(config: CommandConfig) -> CommandOutput:
    """Lists every tree of one kind and degree with its statistics and rotation image."""
    enforce_cap(config, TREE_DEGREE_CAP, "tree")
    table = Table(f"{config.kind} trees of degree {config.degree}",
                  ("tree", "degree", "leaves", "descents", "rotation"))
    records = []
    for tree in enumerate_trees(config.kind, config.degree):
        if config.kind == "binary":
            image = rotate(tree)
            row = (tree.render(), tree.degree, tree.degree + 1, descent_count(tree), image.render())
        else:
            image = unrotate(tree)
            row = (tree.render(), tree.degree, leaf_count(tree), descent_count(image), image.render())
        table.rows.append(row)
        records.append({"kind": config.kind, "tree": tree.to_json(), "text": row[0], "degree": row[1],
                        "leaves": row[2], "descents": row[3], "rotation": row[4]})
    return CommandOutput(0, [table], {"trees": records})


def cmd_coefficients(config: CommandConfig) -> CommandOutput:
    """Closed-formula, fixpoint-log, descent and permutation coefficient tables up to degree N."""
    include_trees = config.kind in ("rooted", "binary", "all")
    include_perms = config.kind in ("permutation", "all")
    if include_trees:
        enforce_cap(config, TREE_DEGREE_CAP, "tree")
    if include_perms:
        enforce_cap(config, PERMUTATION_DEGREE_CAP, "permutation")

    tables: List[Table] = []
    payload = {}
    if config.kind in ("rooted", "all"):
        rooted = [tau for n in range(1, config.degree + 1) for tau in enumerate_rooted(n)]
        theorem = Table("theorem", ("tree", "leaves", "coefficient"),
                        [(tau.render(), leaf_count(tau), magnus_coefficient(tau)) for tau in rooted])
        fixpoint = Table("fixpoint_log", ("tree", "leaves", "coefficient"),
                         [(tau.render(), leaf_count(tau), fixpoint_log_coefficient(tau)) for tau in rooted])
        tables.extend([theorem, fixpoint])
    if config.kind in ("binary", "all"):
        binaries = [t for n in range(1, config.degree + 1) for t in enumerate_binary(n)]
        tables.append(Table("descent", ("tree", "descents", "coefficient"),
                            [(t.render(), descent_count(t), descent_magnus_coefficient(t)) for t in binaries]))
    if include_perms:
        perms = [sigma for n in range(1, config.degree + 1) for sigma in enumerate_permutations(n)]
        tables.append(Table("permutation", ("permutation", "descents", "coefficient"),
                            [(sigma.render(), descent_count_perm(sigma), mps_coefficient(sigma)) for sigma in perms]))
    for table in tables:
        payload[table.name] = [dict(zip(table.header, cells)) for cells in table.cells()]
    logger.info(f"Coefficient tables {[t.name for t in tables]} built to degree {config.degree}")
    return CommandOutput(0, tables, payload)


def cmd_verify(config: CommandConfig) -> CommandOutput:
    """Runs one suite (or all); exit code 1 when any check fails."""
    enforce_cap(config, SUITE_CAPS[config.suite], f"'{config.suite}' suite")
    workers = _workers(config)
    suites = VerificationSuites(config.degree, load_path(config.path), workers)
    results = suites.run(config.suite)
    table = Table(f"verify {config.suite} to degree {config.degree}", ("check", "result", "counterexample"),
                  [(r.name, r.passed, r.counterexample) for r in results])
    passed = all(r.passed for r in results)
    payload = {
        "suite": config.suite,
        "degree": config.degree,
        "passed": passed,
        "checks": [{"name": r.name, "passed": r.passed, "counterexample": r.counterexample} for r in results],
    }
    return CommandOutput(0 if passed else 1, [table], payload)


def cmd_magnus(config: CommandConfig) -> CommandOutput:
    """Ω_N(s) by the permutation route, its exponential, the Chen reference and the residual."""
    enforce_cap(config, MAGNUS_DEGREE_CAP, "permutation-route Magnus")
    a = load_path(config.path)
    routes = MagnusRoutes(a, _workers(config))
    omega = routes.mps_omega(config.degree, config.s)
    exponential = matrix_exp(omega)
    reference = routes.chen_reference(config.degree + REFERENCE_EXTRA_LEVELS, config.s)
    residual = inf_norm(exponential - to_float_matrix(reference))
    d = a.dim
    cells = [(i, j) for i in range(d) for j in range(d)]
    tables = [
        Table("omega", ("row", "col", "value"), [(i, j, omega[i, j]) for i, j in cells]),
        Table("exp_omega", ("row", "col", "value"), [(i, j, float(exponential[i, j])) for i, j in cells]),
        Table("chen_reference", ("row", "col", "value"), [(i, j, reference[i, j]) for i, j in cells]),
        Table("residual", ("norm",), [(residual,)]),
    ]
    payload = {
        "degree": config.degree,
        "s": str(config.s),
        "omega": matrix_to_json(omega),
        "exp_omega": [["%.17g" % float(value) for value in row] for row in exponential],
        "chen_reference": matrix_to_json(reference),
        "residual": "%.17g" % residual,
    }
    logger.info(f"Magnus N={config.degree} at s={config.s}: residual {residual:.3e}")
    return CommandOutput(0, tables, payload)


COMMANDS = {
    "trees": cmd_trees,
    "coefficients": cmd_coefficients,
    "verify": cmd_verify,
    "magnus": cmd_magnus,
}
