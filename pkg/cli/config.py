from argparse import Namespace
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from utilities.exceptions import ConfigurationError

COMMANDS = ("trees", "coefficients", "verify", "magnus")
FORMATS = ("text", "json", "csv", "xlsx")
SUITES = ("axioms", "theorem", "psi", "numeric", "flows", "all")
TREE_KINDS = ("rooted", "binary")
COEFFICIENT_KINDS = ("rooted", "binary", "permutation", "all")

# Safety caps, lifted by --unsafe-degree
TREE_DEGREE_CAP = 8
PERMUTATION_DEGREE_CAP = 6
MAGNUS_DEGREE_CAP = 5

DEFAULT_S = Fraction(1, 4)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigurationError(f"'{text}' is not a rational number")


@dataclass(frozen=True)
class CommandConfig:
    """Validated settings of one CLI invocation."""

    command: str
    degree: int
    kind: str = "rooted"
    suite: str = "all"
    path: str = "default"
    s: Fraction = DEFAULT_S
    output_format: str = "text"
    output: Optional[str] = None
    parallel: bool = False
    unsafe_degree: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigurationError(f"Unknown command '{self.command}'; expected one of {COMMANDS}")
        minimum = 0 if self.command == "trees" else 1
        if self.degree < minimum:
            raise ConfigurationError(f"--degree must be >= {minimum} for '{self.command}', got {self.degree}")
        if self.s < 0:
            raise ConfigurationError(f"--s must be non-negative, got {self.s}")
        if self.output_format not in FORMATS:
            raise ConfigurationError(f"--format must be one of {FORMATS}, got '{self.output_format}'")
        if self.output_format == "xlsx" and not self.output:
            raise ConfigurationError("--format xlsx needs --output")
        if self.suite not in SUITES:
            raise ConfigurationError(f"Unknown suite '{self.suite}'; expected one of {SUITES}")
        kinds = TREE_KINDS if self.command == "trees" else COEFFICIENT_KINDS
        if self.command in ("trees", "coefficients") and self.kind not in kinds:
            raise ConfigurationError(f"--kind must be one of {kinds} for '{self.command}', got '{self.kind}'")

    @classmethod
    def from_args(cls, args: Namespace) -> "CommandConfig":
        default_kind = "all" if args.command == "coefficients" else "rooted"
        suite = getattr(args, "suite_name", None) or getattr(args, "suite", None) or "all"
        return cls(
            command=args.command,
            degree=args.degree,
            kind=args.kind or default_kind,
            suite=suite,
            path=args.path,
            s=parse_rational(args.s),
            output_format=args.format,
            output=args.output,
            parallel=args.parallel,
            unsafe_degree=args.unsafe_degree,
        )
