"""Prime fields GF(p) and the rational field, with canonical scalars.

Scalars are plain Python objects: residues 0..p-1 (int) over GF(p) and
``fractions.Fraction`` over the rationals.  Both representations are
canonical, so equality and hashing come for free.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ._kernels import MAX_PRIME
from .errors import ParseError

__all__ = ["Field", "GF", "QQ", "is_prime"]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """GF(p) for a machine-word prime p, or the rationals (char == 0)."""

    __slots__ = ("char",)

    def __init__(self, char: int):
        char = int(char)
        if char != 0:
            if not is_prime(char):
                raise ValueError(f"field characteristic must be 0 or prime, got {char}")
            if char > MAX_PRIME:
                raise ValueError(f"prime {char} exceeds machine-word limit {MAX_PRIME}")
        self.char = char

    @property
    def is_rational(self) -> bool:
        return self.char == 0

    @property
    def size(self) -> int | None:
        """Number of elements, or None for the rationals."""
        return None if self.char == 0 else self.char

    @property
    def theta(self) -> Fraction:
        """1 for an infinite field, 1 - 1/|F| for GF(p)."""
        if self.char == 0:
            return Fraction(1)
        return 1 - Fraction(1, self.char)

    # -- scalar plumbing ----------------------------------------------------

    def canon(self, x) -> int | Fraction:
        """Canonical representative of a scalar in this field."""
        if self.char == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.char == 0:
                raise ZeroDivisionError(f"denominator not a unit mod {self.char}")
            return x.numerator * pow(x.denominator, -1, self.char) % self.char
        return int(x) % self.char

    def inv(self, x) -> int | Fraction:
        x = self.canon(x)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.char == 0:
            return 1 / x
        return pow(int(x), self.char - 2, self.char)

    def minus_one(self) -> int | Fraction:
        return self.canon(-1)

    def dtype(self):
        return object if self.char == 0 else np.int64

    def array(self, rows) -> np.ndarray:
        """Canonical 2-D array from nested sequences of scalars."""
        data = [[self.canon(x) for x in row] for row in rows]
        ncols = {len(row) for row in data}
        if len(ncols) > 1:
            raise ValueError("ragged rows")
        if self.char == 0:
            arr = np.empty((len(data), ncols.pop() if ncols else 0), dtype=object)
            for i, row in enumerate(data):
                for j, x in enumerate(row):
                    arr[i, j] = x
            return arr
        return np.array(data, dtype=np.int64).reshape(len(data), ncols.pop() if ncols else 0)

    def vector(self, seq) -> np.ndarray:
        """Canonical 1-D array from a sequence of scalars."""
        data = [self.canon(x) for x in seq]
        if self.char == 0:
            arr = np.empty(len(data), dtype=object)
            for i, x in enumerate(data):
                arr[i] = x
            return arr
        return np.array(data, dtype=np.int64)

    # -- scalar serialization ------------------------------------------------

    def scalar_to_json(self, x):
        x = self.canon(x)
        return int(x) if self.char else str(x)

    def scalar_from_json(self, obj):
        if self.char:
            if not isinstance(obj, int):
                raise ParseError(f"expected residue int, got {obj!r}")
            return self.canon(obj)
        try:
            return Fraction(obj)
        except (ValueError, TypeError) as exc:
            raise ParseError(f"cannot parse rational scalar {obj!r}") from exc

    # -- dunders -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.char == other.char

    def __hash__(self) -> int:
        return hash(("Field", self.char))

    def __repr__(self) -> str:
        return "QQ" if self.char == 0 else f"GF({self.char})"

    def to_json(self) -> dict:
        return {"char": self.char}

    @classmethod
    def from_json(cls, obj) -> "Field":
        try:
            return cls(int(obj["char"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad field spec {obj!r}") from exc


def GF(p: int) -> Field:
    """The prime field with p elements."""
    field = Field(p)
    if field.char == 0:
        raise ValueError("GF requires a prime; use QQ for the rationals")
    return field


QQ = Field(0)
