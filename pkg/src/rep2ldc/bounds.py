"""Rank-separation bounds and the entropy audit.

All inequality verdicts that mix logarithms with rationals are decided
exactly: every entropy appearing here is log2 of a ratio of integers, so
"H >= a/b" becomes an integer power comparison.  Floats are attached for
reporting only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    MatchingCrossesPrefixClass,
    NotADistribution,
    PairNotSeparated,
)
from .fields import Field
from .groups import MatrixGroup, burnside_irreducible, fixed_space
from .ldc import LdcInstance, QMatching
from .linalg import Matrix, rank

__all__ = [
    "theta",
    "gamma",
    "LogBound",
    "BoundReport",
    "check_rank_separation",
    "lambda_bound",
    "entropy",
    "match_entropy_check",
    "MatchEntropyResult",
    "EntropyAudit",
    "entropy_audit",
    "AvgFixedSpaceReport",
    "avg_fixed_space",
    "log2_ratio_cmp",
]


def theta(field: Field) -> Fraction:
    """1 for an infinite field, 1 - 1/|F| for GF(p)."""
    return field.theta


def gamma(order: int) -> Fraction:
    """1 for even element order, 1 - 1/order for odd."""
    if order < 1:
        raise ValueError("order must be >= 1")
    if order % 2 == 0:
        return Fraction(1)
    return 1 - Fraction(1, order)


def log2_ratio_cmp(num: int, den: int, q: Fraction) -> int:
    """Sign of log2(num/den) - q, decided with integer powers.

    num, den positive integers.  Returns -1, 0 or +1.
    """
    if num <= 0 or den <= 0:
        raise ValueError("ratio must be positive")
    a, b = q.numerator, q.denominator
    # log2(num/den) >= a/b  <=>  num^b * 2^{-a} >= den^b
    lhs = num**b
    rhs = den**b
    if a >= 0:
        rhs *= 2**a
    else:
        lhs *= 2**(-a)
    if lhs > rhs:
        return 1
    if lhs < rhs:
        return -1
    return 0


@dataclass(frozen=True)
class LogBound:
    """The exact value numerator / (coeff * log2(log_arg))."""

    numerator: Fraction
    log_arg: int
    coeff: int = 1

    @property
    def value(self) -> float:
        if self.numerator == 0:
            return 0.0
        return float(self.numerator) / (self.coeff * math.log2(self.log_arg))

    def satisfied_by(self, k: int) -> bool:
        """Exact test of k >= numerator / (coeff * log2(log_arg))."""
        if self.numerator <= 0:
            return True
        if self.log_arg < 2:
            return False
        a, b = self.numerator.numerator, self.numerator.denominator
        return self.log_arg ** (k * self.coeff * b) >= 2**a

    def to_json(self) -> dict:
        return {
            "numerator": str(self.numerator),
            "log_arg": self.log_arg,
            "coeff": self.coeff,
            "value": self.value,
        }


@dataclass(frozen=True)
class BoundReport:
    """Rank lower bound theta*gamma*n / log2|G| for one element."""

    h: int
    order: int
    gamma: Fraction
    theta: Fraction
    n: int
    group_size: int
    bound: LogBound
    uniform_bound: LogBound
    actual_rank: int
    satisfied: bool
    uniform_satisfied: bool

    def to_json(self) -> dict:
        return {
            "h": self.h,
            "order": self.order,
            "gamma": str(self.gamma),
            "theta": str(self.theta),
            "n": self.n,
            "group_size": self.group_size,
            "bound": self.bound.to_json(),
            "uniform_bound": self.uniform_bound.to_json(),
            "actual_rank": self.actual_rank,
            "satisfied": self.satisfied,
            "uniform_satisfied": self.uniform_satisfied,
        }

    def csv_row(self) -> list:
        return [
            self.h,
            self.order,
            str(self.gamma),
            str(self.theta),
            self.actual_rank,
            f"{self.bound.value:.6f}",
            self.satisfied,
            self.uniform_satisfied,
        ]


def check_rank_separation(group: MatrixGroup) -> list[BoundReport]:
    """One report per non-identity element h: does rank(h - I) clear
    theta*gamma*n / log2|G| and the weaker n / (3 log2|G|)?"""
    n = group.dim
    m = len(group)
    th = group.field.theta
    ident = Matrix.identity(group.field, n)
    reports = []
    for pos in range(m):
        g = group.matrix(pos)
        if g == ident:
            continue
        order = group.element_order(pos)
        gm = gamma(order)
        actual = rank(g - ident)
        bound = LogBound(numerator=th * gm * n, log_arg=m)
        uniform = LogBound(numerator=Fraction(n), log_arg=m, coeff=3)
        reports.append(
            BoundReport(
                h=pos,
                order=order,
                gamma=gm,
                theta=th,
                n=n,
                group_size=m,
                bound=bound,
                uniform_bound=uniform,
                actual_rank=actual,
                satisfied=bound.satisfied_by(actual),
                uniform_satisfied=uniform.satisfied_by(actual),
            )
        )
    return reports


def lambda_bound(n: int, group_size: int, th: Fraction, gm: Fraction) -> LogBound:
    """Bound theta*gamma*n / (2 log2(2|G|)) for rank(rho(h) - lambda*I)."""
    return LogBound(numerator=th * gm * n, log_arg=2 * group_size, coeff=2)


def entropy(weights) -> float:
    """Shannon entropy of an exact distribution, with 0 log(1/0) = 0."""
    weights = [Fraction(w) for w in weights]
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise NotADistribution("weights must be nonnegative and sum to 1")
    return float(sum(-float(w) * math.log2(float(w)) for w in weights if w != 0))


def _entropy_of_counts(counts) -> tuple[float, int, int]:
    """Entropy of counts/total as (float, num, den) with the exact value
    log2(num/den) / total, num = total^total, den = prod c^c."""
    total = sum(counts)
    num = total**total
    den = 1
    h = 0.0
    for c in counts:
        if c:
            den *= c**c
            h -= (c / total) * math.log2(c / total)
    return h, num, den


@dataclass(frozen=True)
class MatchEntropyResult:
    entropy_value: float
    bound: Fraction
    passed: bool


def match_entropy_check(t: int, matching, f) -> MatchEntropyResult:
    """Check H(f(X)) >= 2s/t for X uniform on range(t).

    `matching` is a QMatching or an iterable of disjoint pairs over
    range(t); `f` is an indexable table of length t.  Raises
    PairNotSeparated when f collides on a matched pair (the hypothesis
    of the inequality).  The verdict is exact.
    """
    pairs = matching.sets if isinstance(matching, QMatching) else [
        tuple(p) for p in matching
    ]
    seen: set[int] = set()
    for j1, j2 in pairs:
        if j1 in seen or j2 in seen or j1 == j2:
            raise ValueError("matching pairs must be disjoint")
        seen.update((j1, j2))
        if not (0 <= j1 < t and 0 <= j2 < t):
            raise ValueError("pair index out of range")
        if f[j1] == f[j2]:
            raise PairNotSeparated(f"f agrees on matched pair ({j1}, {j2})")
    counts: dict = {}
    for j in range(t):
        counts[f[j]] = counts.get(f[j], 0) + 1
    h, num, den = _entropy_of_counts(list(counts.values()))
    s = len(pairs)
    bound = Fraction(2 * s, t)
    # H = log2(num/den)/t >= 2s/t  <=>  log2(num/den) >= 2s
    passed = log2_ratio_cmp(num, den, Fraction(2 * s)) >= 0
    return MatchEntropyResult(entropy_value=h, bound=bound, passed=passed)


@dataclass(frozen=True)
class EntropyAudit:
    """Transcript of the chain-rule lower bound on a special-form code."""

    m: int
    t: int
    delta: Fraction
    entropy_value: float            # H(X), X uniform over the rows
    chain_terms: tuple[float, ...]
    matching_bound_terms: tuple[Fraction, ...]
    chain_term_ok: tuple[bool, ...]     # exact, per coordinate
    chain_sum_residual: float
    prefix_class_sizes: tuple[tuple[int, ...], ...]
    upper_ok: bool                  # H(X) <= log2 m, exact
    hx_ge_2dt: bool                 # H(X) >= 2*delta*t, exact
    log2m_ge_2dt: bool              # log2 m >= 2*delta*t, exact
    code_size_relation: str         # m vs 2^{2*delta*t}: "gt" | "eq" | "lt"

    CHAIN_SUM_TOL = 1e-12

    @property
    def chain_sum_ok(self) -> bool:
        return self.chain_sum_residual <= self.CHAIN_SUM_TOL

    @property
    def passed(self) -> bool:
        return (
            all(self.chain_term_ok)
            and self.chain_sum_ok
            and self.upper_ok
            and self.hx_ge_2dt
            and self.log2m_ge_2dt
        )

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "t": self.t,
            "delta": str(self.delta),
            "entropy": self.entropy_value,
            "chain_terms": list(self.chain_terms),
            "matching_bound_terms": [str(b) for b in self.matching_bound_terms],
            "chain_term_ok": list(self.chain_term_ok),
            "chain_sum_residual": self.chain_sum_residual,
            "prefix_class_sizes": [list(s) for s in self.prefix_class_sizes],
            "upper_ok": self.upper_ok,
            "hx_ge_2dt": self.hx_ge_2dt,
            "log2m_ge_2dt": self.log2m_ge_2dt,
            "code_size_relation": self.code_size_relation,
            "passed": self.passed,
        }


def entropy_audit(instance: LdcInstance) -> EntropyAudit:
    """Walk the chain rule over the code coordinates.

    For each coordinate i the rows are partitioned by their length-(i-1)
    prefix; the matching must stay inside one class (pairs agree before i)
    and separate values at i.  Each conditional entropy is then at least
    2|M_i^b| / |J_i^b|, which telescopes into H(X) >= 2*delta*t and,
    with H(X) <= log2 m, into m >= 2^{2*delta*t}.
    """
    if instance.form != "special2":
        raise ValueError("entropy audit applies to special2-form instances")
    m, t = instance.m, instance.t
    vectors = instance.vectors
    rows = [tuple(vectors.row(j)) for j in range(m)]

    full_counts: dict = {}
    for row in rows:
        full_counts[row] = full_counts.get(row, 0) + 1
    h_x, hx_num, hx_den = _entropy_of_counts(list(full_counts.values()))
    # H(X) = log2(hx_num/hx_den) / m

    chain_terms = []
    chain_ok = []
    bound_terms = []
    class_sizes = []
    for i in range(t):
        classes: dict = {}
        for j, row in enumerate(rows):
            classes.setdefault(row[:i], []).append(j)
        sizes = tuple(len(v) for v in classes.values())
        class_sizes.append(sizes)

        matching = instance.matchings[i]
        per_class_pairs: dict = {}
        for j1, j2 in matching.sets:
            b1, b2 = rows[j1][:i], rows[j2][:i]
            if b1 != b2:
                raise MatchingCrossesPrefixClass(
                    f"pair ({j1}, {j2}) crosses prefix classes at coordinate {i}"
                )
            if rows[j1][i] == rows[j2][i]:
                raise PairNotSeparated(
                    f"pair ({j1}, {j2}) agrees at coordinate {i}"
                )
            per_class_pairs[b1] = per_class_pairs.get(b1, 0) + 1

        # m * H(X_i | prefix) = log2( prod_b |J_b|^{|J_b|} / prod_{b,v} c^c );
        # per class, |J_b| * H(X_i | b) >= 2 |M_i^b| must hold on its own
        num = 1
        den = 1
        term = 0.0
        classes_ok = True
        for b, members in classes.items():
            jb = len(members)
            num *= jb**jb
            val_counts: dict = {}
            for j in members:
                val_counts[rows[j][i]] = val_counts.get(rows[j][i], 0) + 1
            hb = 0.0
            den_b = 1
            for c in val_counts.values():
                den_b *= c**c
                hb -= (c / jb) * math.log2(c / jb)
            den *= den_b
            term += (jb / m) * hb
            pairs_b = per_class_pairs.get(b, 0)
            if pairs_b and log2_ratio_cmp(jb**jb, den_b, Fraction(2 * pairs_b)) < 0:
                classes_ok = False
        chain_terms.append(term)
        mi = matching.size
        bound_terms.append(Fraction(2 * mi, m))
        chain_ok.append(
            classes_ok and log2_ratio_cmp(num, den, Fraction(2 * mi)) >= 0
        )

    delta = Fraction(instance.matching_total(), m * t)
    two_dt = 2 * delta * t          # equals 2*sigma/m
    residual = abs(sum(chain_terms) - h_x)
    # m*H(X) = log2(hx_num/hx_den); H <= log2 m  <=>  hx_num <= m^m * hx_den
    upper_ok = hx_num <= m**m * hx_den
    hx_ge = log2_ratio_cmp(hx_num, hx_den, two_dt * m) >= 0
    log_cmp = log2_ratio_cmp(m, 1, two_dt)
    return EntropyAudit(
        m=m,
        t=t,
        delta=delta,
        entropy_value=h_x,
        chain_terms=tuple(chain_terms),
        matching_bound_terms=tuple(bound_terms),
        chain_term_ok=tuple(chain_ok),
        chain_sum_residual=residual,
        prefix_class_sizes=tuple(class_sizes),
        upper_ok=upper_ok,
        hx_ge_2dt=hx_ge,
        log2m_ge_2dt=log_cmp >= 0,
        code_size_relation={1: "gt", 0: "eq", -1: "lt"}[log_cmp],
    )


@dataclass(frozen=True)
class AvgFixedSpaceReport:
    """Average fixed-space dimension over all group elements."""

    average: Fraction
    bound: Fraction
    passed: bool
    irreducible: bool

    @property
    def applicable(self) -> bool:
        return self.irreducible

    def to_json(self) -> dict:
        return {
            "average": str(self.average),
            "bound": str(self.bound),
            "passed": self.passed,
            "irreducible": self.irreducible,
            "applicable": self.applicable,
        }


def avg_fixed_space(group: MatrixGroup) -> AvgFixedSpaceReport:
    """Exact average of dim C(h) over the whole group, compared to n/2.

    The bound is only meaningful for irreducible actions; burnside
    evidence is recorded so reducible inputs can be flagged as
    not-applicable rather than as violations.
    """
    n = group.dim
    total = 0
    for pos in range(len(group)):
        total += fixed_space(group, pos).dim
    avg = Fraction(total, len(group))
    bound = Fraction(n, 2)
    return AvgFixedSpaceReport(
        average=avg,
        bound=bound,
        passed=avg <= bound,
        irreducible=burnside_irreducible(group),
    )
