from fractions import Fraction
from typing import Any, Callable, Dict, Hashable, Iterable, Iterator, List, Mapping, Tuple, Union

from utilities.exceptions import TruncationMismatchError

Scalar = Union[int, Fraction]
BasisProduct = Callable[[Hashable, Hashable], Mapping[Hashable, Scalar]]


def accumulate(target: Dict[Hashable, Fraction], key: Hashable, coefficient: Scalar) -> None:
    """Adds ``coefficient`` to ``target[key]``, dropping the key when the sum vanishes."""
    value = target.get(key, 0) + coefficient
    if value:
        target[key] = Fraction(value)
    else:
        target.pop(key, None)


class BaseSeries:
    """
    BaseSeries encapsulates the functionality shared by every truncated graded linear
    combination with exact rational coefficients: linear structure, truncation checks,
    canonical ordering, bilinear extension of basis products and JSON serialization.

    Subclasses fix the basis by overriding the basis hooks (degree, ordering, text form,
    unit key) and the JSON field name.
    """

    KEY_FIELD = "key"

    def __init__(self, trunc: int, terms: Mapping[Hashable, Scalar] = None):
        """
        Initializes the series, dropping zero coefficients and terms above the truncation.

        Args:
            trunc (int): Maximum degree N kept in the series.
            terms (Mapping[Hashable, Scalar], optional): Basis element → coefficient.
        """
        if trunc < 0:
            raise ValueError(f"Truncation degree must be non-negative, got {trunc}")
        self.trunc = trunc
        self.terms: Dict[Hashable, Fraction] = {}
        for key, coefficient in (terms or {}).items():
            if coefficient and self.degree_of(key) <= trunc:
                self.terms[key] = Fraction(coefficient)

    # Basis hooks

    @staticmethod
    def degree_of(key: Hashable) -> int:
        raise NotImplementedError

    @staticmethod
    def sort_key(key: Hashable) -> Any:
        raise NotImplementedError

    @staticmethod
    def key_to_text(key: Hashable) -> str:
        raise NotImplementedError

    @staticmethod
    def key_from_text(text: str) -> Hashable:
        raise NotImplementedError

    @classmethod
    def unit_key(cls) -> Hashable:
        raise NotImplementedError

    # Construction

    def _new(self, terms: Mapping[Hashable, Scalar]) -> "BaseSeries":
        return type(self)(self.trunc, terms)

    @classmethod
    def unit(cls, trunc: int) -> "BaseSeries":
        return cls(trunc, {cls.unit_key(): 1})

    @classmethod
    def basis(cls, key: Hashable, trunc: int, coefficient: Scalar = 1) -> "BaseSeries":
        return cls(trunc, {key: coefficient})

    @classmethod
    def sum_of(cls, keys: Iterable[Hashable], trunc: int) -> "BaseSeries":
        terms: Dict[Hashable, Fraction] = {}
        for key in keys:
            accumulate(terms, key, 1)
        return cls(trunc, terms)

    def zero_like(self) -> "BaseSeries":
        return self._new({})

    def check_compatible(self, other: "BaseSeries") -> None:
        if not isinstance(other, BaseSeries) or type(other) is not type(self):
            raise TypeError(f"Cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.trunc != self.trunc:
            raise TruncationMismatchError(
                f"Truncation degrees differ: {self.trunc} vs {other.trunc}"
            )

    # Linear structure

    def __add__(self, other: "BaseSeries") -> "BaseSeries":
        self.check_compatible(other)
        terms = dict(self.terms)
        for key, coefficient in other.terms.items():
            accumulate(terms, key, coefficient)
        return self._new(terms)

    def __sub__(self, other: "BaseSeries") -> "BaseSeries":
        return self + (-other)

    def __neg__(self) -> "BaseSeries":
        return self._new({key: -coefficient for key, coefficient in self.terms.items()})

    def __mul__(self, scalar: Scalar) -> "BaseSeries":
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return self._new({key: coefficient * scalar for key, coefficient in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, BaseSeries) or type(other) is not type(self):
            return NotImplemented
        return self.trunc == other.trunc and self.terms == other.terms

    def __hash__(self):
        return hash((self.trunc, frozenset(self.terms.items())))

    # Inspection

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Hashable, Fraction]]:
        for key in sorted(self.terms, key=self.sort_key):
            yield key, self.terms[key]

    def coefficient(self, key: Hashable) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def constant_term(self) -> Fraction:
        return self.coefficient(self.unit_key())

    def homogeneous(self, n: int) -> "BaseSeries":
        """Degree-n component."""
        return self._new({key: c for key, c in self.terms.items() if self.degree_of(key) == n})

    # Products

    def bilinear(self, other: "BaseSeries", basis_product: BasisProduct) -> "BaseSeries":
        """
        Extends a product of basis elements bilinearly, skipping pairs above the truncation.

        Args:
            other (BaseSeries): Right operand with the same truncation degree.
            basis_product (BasisProduct): Product of two basis elements as a key → coefficient map.

        Returns:
            BaseSeries: The truncated product.
        """
        self.check_compatible(other)
        terms: Dict[Hashable, Fraction] = {}
        for left, left_coefficient in self.terms.items():
            left_degree = self.degree_of(left)
            for right, right_coefficient in other.terms.items():
                if left_degree + self.degree_of(right) > self.trunc:
                    continue
                scale = left_coefficient * right_coefficient
                for key, coefficient in basis_product(left, right).items():
                    accumulate(terms, key, scale * coefficient)
        return self._new(terms)

    # Serialization

    def to_json(self) -> Dict[str, Any]:
        return {
            "trunc": self.trunc,
            "terms": [
                {self.KEY_FIELD: self.key_to_json(key), "num": str(c.numerator), "den": str(c.denominator)}
                for key, c in self
            ],
        }

    @classmethod
    def from_json(cls, payload: Mapping[str, Any]) -> "BaseSeries":
        terms: Dict[Hashable, Fraction] = {}
        for entry in payload["terms"]:
            key = cls.key_from_json(entry[cls.KEY_FIELD])
            accumulate(terms, key, Fraction(int(entry["num"]), int(entry["den"])))
        return cls(int(payload["trunc"]), terms)

    def key_to_json(self, key: Hashable) -> Any:
        return self.key_to_text(key)

    @classmethod
    def key_from_json(cls, value: Any) -> Hashable:
        return cls.key_from_text(value)

    def render(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{self.key_to_text(key)}" for key, c in self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(trunc={self.trunc}, {self.render()})"

    def rows(self) -> List[Tuple[str, int, Fraction]]:
        return [(self.key_to_text(key), self.degree_of(key), c) for key, c in self]
