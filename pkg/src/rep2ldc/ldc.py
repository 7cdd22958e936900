"""Locally decodable codes as vector lists with per-coordinate matchings.

An instance is a sequence of m vectors in F^t together with one family of
pairwise-disjoint query sets per coordinate.  In `general` form each set
spans the standard basis vector of its coordinate; in `special2` form the
sets are pairs whose difference is a nonzero multiple of it.  Indices into
the vector list are 0-based throughout.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch
from .fields import Field
from .linalg import Matrix, rank

__all__ = [
    "QMatching",
    "LdcInstance",
    "VerificationReport",
    "CoordinateReport",
    "verify",
    "achieved_delta",
    "max_special_matching",
    "greedy_matching_general",
    "greedy_disjoint",
    "hadamard",
]


@dataclass(frozen=True)
class QMatching:
    """Family of pairwise disjoint q-subsets of code positions."""

    q: int
    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for s in self.sets:
            if len(set(s)) != self.q or len(s) != self.q:
                raise ValueError(f"set {s} does not have exactly q={self.q} members")
            if seen.intersection(s):
                raise ValueError(f"set {s} overlaps an earlier set")
            seen.update(s)
        object.__setattr__(self, "sets", tuple(tuple(sorted(s)) for s in self.sets))

    @property
    def size(self) -> int:
        return len(self.sets)


def _scalar_sort_key(x):
    if isinstance(x, Fraction):
        return (x.numerator, x.denominator)
    return (int(x), 1)


@dataclass(frozen=True)
class LdcInstance:
    """Code vectors a_0..a_{m-1} in F^t plus per-coordinate matchings."""

    field: Field
    t: int
    m: int
    vectors: Matrix          # m x t, row j = a_j
    matchings: tuple[QMatching, ...]
    form: str                # "special2" | "general"
    q: int
    claimed_delta: Fraction

    def __post_init__(self):
        if self.form not in ("special2", "general"):
            raise ValueError(f"unknown form {self.form!r}")
        if self.form == "special2" and self.q != 2:
            raise ValueError("special2 form requires q = 2")
        if self.vectors.rows != self.m or self.vectors.cols != self.t:
            raise DimensionMismatch("vectors shape does not match (m, t)")
        if len(self.matchings) != self.t:
            raise ValueError("need exactly one matching per coordinate")
        for mi in self.matchings:
            if mi.q != self.q:
                raise ValueError("matching arity differs from declared q")
            for s in mi.sets:
                if any(j < 0 or j >= self.m for j in s):
                    raise ValueError(f"index out of range in {s}")

    def as_general(self) -> "LdcInstance":
        """View a special2 instance under the general-form contract."""
        return LdcInstance(
            field=self.field,
            t=self.t,
            m=self.m,
            vectors=self.vectors,
            matchings=self.matchings,
            form="general",
            q=self.q,
            claimed_delta=self.claimed_delta,
        )

    def matching_total(self) -> int:
        return sum(mi.size for mi in self.matchings)


@dataclass(frozen=True)
class CoordinateReport:
    coordinate: int
    matching_size: int
    span_failures: tuple[tuple[int, ...], ...]
    structure_failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.span_failures and not self.structure_failures


@dataclass(frozen=True)
class VerificationReport:
    form: str
    m: int
    t: int
    coordinates: tuple[CoordinateReport, ...]
    sigma: int
    achieved_delta: Fraction
    claimed_delta: Fraction
    delta_ok: bool
    structure_errors: tuple[str, ...] = dc_field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return self.delta_ok and not self.structure_errors and all(
            c.ok for c in self.coordinates
        )

    def to_json(self) -> dict:
        return {
            "form": self.form,
            "m": self.m,
            "t": self.t,
            "sigma": self.sigma,
            "achieved_delta": str(self.achieved_delta),
            "claimed_delta": str(self.claimed_delta),
            "delta_ok": self.delta_ok,
            "passed": self.passed,
            "structure_errors": list(self.structure_errors),
            "coordinates": [
                {
                    "coordinate": c.coordinate,
                    "matching_size": c.matching_size,
                    "span_failures": [list(s) for s in c.span_failures],
                    "structure_failures": list(c.structure_failures),
                }
                for c in self.coordinates
            ],
        }


def _special_pair_ok(vectors: Matrix, i: int, pair: Sequence[int]) -> bool:
    """True iff a_{j1} - a_{j2} is a nonzero multiple of e_i."""
    j1, j2 = pair
    d = vectors.row(j1) - vectors.row(j2)
    if vectors.field.char:
        d = d % vectors.field.char
    if d[i] == 0:
        return False
    nz = np.nonzero(d != 0)[0]
    return len(nz) == 1 and int(nz[0]) == i


def _general_set_ok(vectors: Matrix, i: int, idxs: Sequence[int]) -> bool:
    """True iff e_i lies in the span of the selected code vectors."""
    field = vectors.field
    sub = np.ascontiguousarray(vectors.a[list(idxs)])
    base = Matrix(field, sub, _canonical=True)
    r0 = rank(base)
    e = Matrix.zeros(field, 1, vectors.cols).a.copy()
    e[0, i] = field.canon(1)
    ext = Matrix(field, np.concatenate([sub, e], axis=0), _canonical=True)
    return rank(ext) == r0


def verify(instance: LdcInstance) -> VerificationReport:
    """Check every matching set against the instance's form and the
    claimed density.  Failures are report entries, never exceptions;
    set sizes and disjointness are re-checked here even though QMatching
    enforces them at construction."""
    coords = []
    for i, mi in enumerate(instance.matchings):
        failures = []
        structure = []
        used: set[int] = set()
        for s in mi.sets:
            bad_shape = len(set(s)) != instance.q or len(s) != instance.q
            if bad_shape:
                structure.append(f"set {s} does not have {instance.q} distinct members")
            if used.intersection(s):
                structure.append(f"set {s} overlaps an earlier set")
            used.update(s)
            if any(j < 0 or j >= instance.m for j in s):
                structure.append(f"set {s} indexes outside the code")
                continue
            if bad_shape:
                continue
            if instance.form == "special2":
                ok = _special_pair_ok(instance.vectors, i, s)
            else:
                ok = _general_set_ok(instance.vectors, i, s)
            if not ok:
                failures.append(s)
        coords.append(
            CoordinateReport(
                coordinate=i,
                matching_size=mi.size,
                span_failures=tuple(failures),
                structure_failures=tuple(structure),
            )
        )
    sigma = instance.matching_total()
    delta = Fraction(sigma, instance.m * instance.t)
    return VerificationReport(
        form=instance.form,
        m=instance.m,
        t=instance.t,
        coordinates=tuple(coords),
        sigma=sigma,
        achieved_delta=delta,
        claimed_delta=instance.claimed_delta,
        delta_ok=delta >= instance.claimed_delta,
    )


def achieved_delta(instance: LdcInstance) -> Fraction:
    """Exact sum of matching sizes over m*t."""
    return Fraction(instance.matching_total(), instance.m * instance.t)


def max_special_matching(vectors: Matrix, i: int) -> QMatching:
    """Maximum-size family of disjoint pairs differing exactly at coordinate i.

    Vectors that agree off coordinate i form a bucket; within a bucket the
    agreement graph is complete multipartite (parts = value at i), whose
    maximum matching has size min(floor(B/2), B - largest part).  Pairing
    the two currently largest parts achieves it.
    """
    field = vectors.field
    buckets: dict = {}
    for j in range(vectors.rows):
        row = vectors.row(j)
        punctured = tuple(row[k] for k in range(vectors.cols) if k != i)
        buckets.setdefault(punctured, {}).setdefault(row[i], []).append(j)

    pairs = []
    for punctured in sorted(buckets, key=lambda t: tuple(map(_scalar_sort_key, t))):
        parts = buckets[punctured]
        heap = [
            (-len(idxs), _scalar_sort_key(val), idxs)
            for val, idxs in parts.items()
        ]
        heapq.heapify(heap)
        while len(heap) >= 2:
            n1, k1, idxs1 = heapq.heappop(heap)
            n2, k2, idxs2 = heapq.heappop(heap)
            pairs.append(tuple(sorted((idxs1.pop(0), idxs2.pop(0)))))
            if idxs1:
                heapq.heappush(heap, (n1 + 1, k1, idxs1))
            if idxs2:
                heapq.heappush(heap, (n2 + 1, k2, idxs2))
    pairs.sort()
    return QMatching(q=2, sets=tuple(pairs))


def greedy_disjoint(candidates: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """First-fit maximal disjoint subfamily, preserving candidate order."""
    kept = []
    used: set[int] = set()
    for cand in candidates:
        if not used.intersection(cand):
            kept.append(tuple(sorted(cand)))
            used.update(cand)
    return kept


def greedy_matching_general(
    vectors: Matrix,
    i: int,
    q: int,
    candidate_sets: Sequence[Sequence[int]],
    validate: bool = True,
) -> QMatching:
    """Greedy disjoint subfamily of spanning q-sets for coordinate i.

    When every index appears in at most q candidates, the kept family has
    size >= len(candidates)/q**2.  With validate=True each candidate is
    first checked to span e_i.
    """
    if validate:
        for s in candidate_sets:
            if not _general_set_ok(vectors, i, s):
                raise ValueError(f"candidate {tuple(s)} does not span e_{i}")
    return QMatching(q=q, sets=tuple(greedy_disjoint(candidate_sets)))


def hadamard(n: int, field: Field) -> LdcInstance:
    """All 2**n zero-one vectors with the perfect bit-flip matchings.

    Vector k has coordinate i equal to bit i of k; coordinate i pairs k
    with k + 2**i, giving 2**(n-1) disjoint pairs per coordinate and
    density exactly 1/2 in special form over any field.
    """
    if n < 1:
        raise ValueError("hadamard needs n >= 1")
    m = 2**n
    rows = [[(k >> i) & 1 for i in range(n)] for k in range(m)]
    vectors = Matrix(field, rows)
    matchings = []
    for i in range(n):
        bit = 1 << i
        sets = tuple((k, k | bit) for k in range(m) if not k & bit)
        matchings.append(QMatching(q=2, sets=sets))
    return LdcInstance(
        field=field,
        t=n,
        m=m,
        vectors=vectors,
        matchings=tuple(matchings),
        form="special2",
        q=2,
        claimed_delta=Fraction(1, 2),
    )
