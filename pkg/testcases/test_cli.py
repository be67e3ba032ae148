import io
import json
import math
import os
import tempfile
from fractions import Fraction
from unittest import mock

import softest
from ddt import ddt, data, unpack

from cli.config import CommandConfig, parse_rational
from cli.main import EXIT_OK, EXIT_RESOURCE_CAP, EXIT_USAGE, EXIT_VERIFY_FAILED, main
from cli.suites import CheckResult
from utilities.exceptions import ConfigurationError
from utilities.utils import Utils

TESTDATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), os.pardir, "testdata")


def run(*argv):
    stdout = io.StringIO()
    code = main(list(argv), stdout=stdout)
    return code, stdout.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--format", "json")
    return code, json.loads(text) if text else None


@ddt
class TestTreesCommand(softest.TestCase):

    @data(("rooted", 3, 5), ("binary", 3, 5), ("binary", 0, 1), ("rooted", 0, 1), ("rooted", 4, 14))
    @unpack
    def test_counts(self, kind: str, degree: int, expected: int):
        code, payload = run_json("trees", "--kind", kind, "--degree", str(degree))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(payload["trees"]), expected)

    def test_rotation_column(self):
        _, payload = run_json("trees", "--kind", "binary", "--degree", "2")
        rotations = {record["text"]: record["rotation"] for record in payload["trees"]}
        self.assertEqual(rotations["(. (. .))"], "[[][]]")
        self.assertEqual(rotations["((. .) .)"], "[[[]]]")

    def test_text_table(self):
        code, text = run("trees", "--kind", "rooted", "--degree", "2")
        lines = text.splitlines()
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(lines[0], "# rooted trees of degree 2")
        self.assertTrue(lines[1].startswith("tree"))
        self.assertEqual(len(lines), 4)

    def test_csv_table(self):
        _, text = run("trees", "--kind", "binary", "--degree", "1", "--format", "csv")
        self.assertEqual(text.splitlines(), ["# binary trees of degree 1", "tree,degree,leaves,descents,rotation",
                                             "(. .),1,2,0,[[]]"])

    def test_output_is_deterministic(self):
        self.assertEqual(run("trees", "--degree", "4"), run("trees", "--degree", "4"))


class TestCoefficientsCommand(softest.TestCase):

    def test_degree_two_tables(self):
        code, payload = run_json("coefficients", "--degree", "2")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(set(payload), {"theorem", "fixpoint_log", "descent", "permutation"})
        theorem = {row["tree"]: row["coefficient"] for row in payload["theorem"]}
        self.assertEqual(theorem, {"[[]]": "1", "[[[]]]": "1/2", "[[][]]": "-1/2"})
        fixpoint = {row["tree"]: row["coefficient"] for row in payload["fixpoint_log"]}
        self.assertEqual(fixpoint["[[[]]]"], "-1/2")
        permutations = {row["permutation"]: (row["descents"], row["coefficient"]) for row in payload["permutation"]}
        self.assertEqual(permutations, {"(1)": (0, "1"), "(12)": (0, "1/2"), "(21)": (1, "-1/2")})

    def test_kind_selects_tables(self):
        _, payload = run_json("coefficients", "--kind", "binary", "--degree", "3")
        self.assertEqual(list(payload), ["descent"])
        self.assertEqual(len(payload["descent"]), 1 + 2 + 5)

    def test_xlsx_round_trip(self):
        with tempfile.TemporaryDirectory() as folder:
            target = os.path.join(folder, "coefficients.xlsx")
            code, text = run("coefficients", "--degree", "3", "--format", "xlsx", "--output", target)
            self.assertEqual((code, text), (EXIT_OK, ""))
            reader = Utils()
            theorem = reader.read_coefficient_table(target, "theorem")
            permutation = reader.read_coefficient_table(target, "permutation")
            missing = reader.read_coefficient_table(target, "no-such-sheet")
        _, payload = run_json("coefficients", "--degree", "3")
        expected = {row["tree"]: Fraction(row["coefficient"]) for row in payload["theorem"]}
        self.assertEqual(theorem, expected)
        self.assertEqual(theorem["[[][]]"], Fraction(-1, 2))
        self.assertEqual(permutation["(21)"], Fraction(-1, 2))
        self.assertEqual(len(permutation), 1 + 2 + 6)
        self.assertIsNone(missing)

    def test_xlsx_reader_rejects_foreign_sheets(self):
        with tempfile.TemporaryDirectory() as folder:
            target = os.path.join(folder, "foreign.xlsx")
            Utils.write_data_to_excel_file(target, {"notes": (("tree", "comment"), [("[[]]", "leaf")])})
            self.assertIsNone(Utils().read_coefficient_table(target, "notes"))
            self.assertIsNone(Utils().read_coefficient_table(os.path.join(folder, "absent.xlsx"), "notes"))

    def test_output_file(self):
        with tempfile.TemporaryDirectory() as folder:
            target = os.path.join(folder, "perms.csv")
            code, text = run("coefficients", "--kind", "permutation", "--degree", "2", "--format", "csv",
                             "--output", target)
            with open(target, encoding="utf-8") as handle:
                written = handle.read()
        self.assertEqual((code, text), (EXIT_OK, ""))
        self.assertIn("(21),1,-1/2", written.splitlines())


@ddt
class TestVerifyCommand(softest.TestCase):

    @data(("theorem", 4), ("psi", 4), ("axioms", 3), ("flows", 4), ("numeric", 3))
    @unpack
    def test_suites_pass(self, suite: str, degree: int):
        code, payload = run_json("verify", suite, "--degree", str(degree))
        failures = [check for check in payload["checks"] if not check["passed"]]
        self.assertEqual(failures, [])
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(payload["passed"])

    def test_suite_flag(self):
        code, payload = run_json("verify", "--suite", "theorem", "--degree", "3")
        self.assertEqual((code, payload["suite"]), (EXIT_OK, "theorem"))

    def test_failure_exit_code(self):
        failing = [CheckResult("forced", False, "counterexample")]
        with mock.patch("cli.commands.VerificationSuites.run", return_value=failing):
            code, text = run("verify", "theorem", "--degree", "2")
        self.assertEqual(code, EXIT_VERIFY_FAILED)
        self.assertIn("FAIL", text)

    def test_verify_all_is_deterministic(self):
        runs = []
        for threads, extra in (("1", ()), ("2", ("--parallel",)), ("1", ())):
            with mock.patch.dict(os.environ, {"MAGNUS_FOREST_THREADS": threads}):
                runs.append(run("verify", "all", "--degree", "5", *extra))
        self.assertEqual([code for code, _ in runs], [EXIT_OK] * 3)
        self.assertEqual(runs[1][1], runs[0][1])
        self.assertEqual(runs[2][1], runs[0][1])


class TestMagnusCommand(softest.TestCase):

    def test_scalar_path(self):
        code, payload = run_json("magnus", "--degree", "3", "--s", "1/2",
                                 "--path", os.path.join(TESTDATA, "scalar_path.json"))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(payload["omega"], {"dim": 1, "entries": [[["5/8"]]]})
        self.assertAlmostEqual(float(payload["exp_omega"][0][0]), math.exp(0.625), places=12)

    def test_first_order(self):
        _, payload = run_json("magnus", "--degree", "1")
        self.assertEqual(payload["omega"]["entries"], [[["0"], ["1/4"]], [["-9/32"], ["0"]]])
        self.assertEqual(payload["s"], "1/4")

    def test_residual_at_degree_four(self):
        code, payload = run_json("magnus", "--degree", "4", "--s", "1/4")
        self.assertEqual(code, EXIT_OK)
        self.assertLess(float(payload["residual"]), 1e-4)


@ddt
class TestExitCodes(softest.TestCase):

    @data(["trees", "--degree", "9"],
          ["coefficients", "--kind", "permutation", "--degree", "7"],
          ["magnus", "--degree", "6"],
          ["verify", "psi", "--degree", "7"])
    def test_safety_caps(self, argv):
        self.assertEqual(run(*argv)[0], EXIT_RESOURCE_CAP)

    def test_unsafe_degree_lifts_the_cap(self):
        code, payload = run_json("trees", "--degree", "9", "--unsafe-degree")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(payload["trees"]), 4862)

    @data(["trees"],
          ["bogus", "--degree", "2"],
          ["trees", "--degree", "2", "--format", "yaml"],
          ["trees", "--degree", "-1"],
          ["coefficients", "--degree", "0"],
          ["magnus", "--degree", "2", "--s", "abc"],
          ["magnus", "--degree", "2", "--s=-1/4"],
          ["coefficients", "--degree", "2", "--format", "xlsx"],
          ["verify", "nope", "--degree", "2"])
    def test_usage_errors(self, argv):
        self.assertEqual(run(*argv)[0], EXIT_USAGE)

    @data("malformed_path.json", "missing_path.json")
    def test_bad_path_files(self, name: str):
        code, text = run("magnus", "--degree", "2", "--path", os.path.join(TESTDATA, name))
        self.assertEqual((code, text), (EXIT_USAGE, ""))

    def test_malformed_thread_cap_is_a_usage_error(self):
        with mock.patch.dict(os.environ, {"MAGNUS_FOREST_THREADS": "many"}):
            code, text = run("magnus", "--degree", "2")
        self.assertEqual((code, text), (EXIT_USAGE, ""))

    def test_help(self):
        with mock.patch("sys.stdout", new_callable=io.StringIO):
            self.assertEqual(run("--help")[0], EXIT_OK)


class TestCommandConfig(softest.TestCase):

    def test_defaults(self):
        config = CommandConfig("magnus", 3)
        self.assertEqual((config.s, config.path, config.output_format), (Fraction(1, 4), "default", "text"))

    def test_validation(self):
        for kwargs in ({"command": "trees", "degree": 2, "kind": "permutation"},
                       {"command": "verify", "degree": 2, "suite": "everything"},
                       {"command": "magnus", "degree": 0},
                       {"command": "render", "degree": 1}):
            with self.assertRaises(ConfigurationError):
                CommandConfig(**kwargs)

    def test_parse_rational(self):
        self.assertEqual(parse_rational("3/8"), Fraction(3, 8))
        with self.assertRaises(ConfigurationError):
            parse_rational("1/0")
