"""Re-verification of serialized construction certificates.

A certificate file embeds the group spec, so the group is re-enumerated
(BFS order is canonical, hence positions match) and every pipeline
invariant is re-checked from the file alone.  Failures accumulate as
strings; nothing is repaired.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bounds import EntropyAudit, entropy_audit, gamma
from .construct import (
    ConstructionCert,
    SpanningFamily,
    validate_family,
    check_spanning_identities,
    combine,
    orbit_projection_check,
)
from .errors import ParseError, Rep2LdcError
from .ldc import VerificationReport, verify
from .linalg import Subspace, rank
from .serialize import (
    group_from_spec_json,
    group_spec_hash,
    ldc_from_json,
    matrix_from_json,
)

__all__ = ["CertCheckReport", "cert_from_json", "verify_cert", "verify_cert_json"]


@dataclass(frozen=True)
class CertCheckReport:
    kind: str
    failures: tuple[str, ...]
    code_report: VerificationReport
    audit: EntropyAudit | None

    @property
    def passed(self) -> bool:
        return not self.failures and self.code_report.passed and (
            self.audit is None or self.audit.passed
        )

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "passed": self.passed,
            "failures": list(self.failures),
            "code_report": self.code_report.to_json(),
            "entropy_audit": None if self.audit is None else self.audit.to_json(),
        }


def cert_from_json(obj) -> ConstructionCert:
    """Rebuild a ConstructionCert from its JSON document."""
    try:
        spec = obj["group"]
        group = group_from_spec_json(spec)
        if group_spec_hash(spec) != obj["group_hash"]:
            raise ParseError("group hash does not match embedded spec")
        field = group.field
        kind = str(obj["kind"])
        hs = tuple(int(h) for h in obj["hs"])
        alphas = tuple(field.scalar_from_json(a) for a in obj["alphas"])
        lam = None if obj.get("lambda") is None else field.scalar_from_json(obj["lambda"])
        d = matrix_from_json(obj["D"])
        y = matrix_from_json(obj["Y"])
        x = matrix_from_json(obj["X"])
        fam = obj["family"]
        family = SpanningFamily(
            g_refs=tuple(int(g) for g in fam["g_refs"]),
            U=Subspace(field, group.dim, matrix_from_json(fam["U"])),
            W=matrix_from_json(fam["W"]),
            hat_w=tuple(
                field.vector([field.scalar_from_json(v) for v in h])
                for h in fam["hat_w"]
            ),
        )
        z = field.vector([field.scalar_from_json(v) for v in obj["z"]])
        code = ldc_from_json(obj["code"])
        cert = ConstructionCert(
            group=group,
            kind=kind,
            hs=hs,
            alphas=alphas,
            lam=lam,
            D=d,
            R=int(obj["R"]),
            Y=y,
            X=x,
            family=family,
            z=z,
            kept_s=tuple(int(s) for s in obj["kept_s"]),
            prefilter_size=int(obj["prefilter_size"]),
            beta_nonzero_count=tuple(int(c) for c in obj["beta_nonzero_count"]),
            code=code,
            achieved_delta=Fraction(obj["achieved_delta"]),
            seed=int(obj["seed"]),
        )
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError, IndexError, ZeroDivisionError) as exc:
        raise ParseError(f"bad certificate document: {exc}") from exc
    if cert.kind not in ("special2", "general", "lambda"):
        raise ParseError(f"unknown certificate kind {cert.kind!r}")
    return cert


def _beta_mask(cert: ConstructionCert) -> list[list[bool]]:
    """mask[j][si]: does beta_{j,s}(z) survive for kept_s[si]?"""
    from .construct import beta

    return [
        [beta(cert, j, s) != 0 for s in cert.kept_s]
        for j in range(cert.family.t)
    ]


def verify_cert(cert: ConstructionCert) -> CertCheckReport:
    """Re-check every invariant of a (possibly deserialized) certificate."""
    group = cert.group
    field = group.field
    n = group.dim
    m = len(group)
    failures: list[str] = []

    def check(cond: bool, what: str) -> None:
        if not cond:
            failures.append(what)

    check(cert.D == combine(group, cert.hs, cert.alphas),
          "D is not the stated combination of group elements")
    check(not cert.D.is_zero(), "D is zero")
    check(rank(cert.D) == cert.R, "stated R differs from rank(D)")
    check(cert.Y @ cert.X.T == cert.D, "Y X^T != D")
    check(rank(cert.Y) == cert.R and rank(cert.X) == cert.R,
          "factor ranks differ from R")
    check(
        Subspace.from_rows(field, n, cert.Y.T) == cert.family.U,
        "U is not the column span of Y",
    )
    try:
        validate_family(group, cert.family, cert.Y)
    except Rep2LdcError as exc:
        failures.append(f"spanning family invalid: {exc}")
    check(cert.family.t >= math.ceil(n / cert.R), "t below ceil(n/R)")

    # pre-filter matching structure at the s-level
    check(len(cert.kept_s) == cert.prefilter_size,
          "prefilter size differs from kept_s length")
    h_perms = [group.left_perm(h) for h in cert.hs]
    used: set[int] = set()
    disjoint = True
    for s in cert.kept_s:
        tup = {int(perm[s]) for perm in h_perms}
        if len(tup) != len(cert.hs) or used.intersection(tup):
            disjoint = False
            break
        used.update(tup)
    check(disjoint, "pre-filter tuples are not disjoint")
    if cert.kind in ("special2", "lambda"):
        g_h = gamma(group.element_order(cert.hs[0]))
        check(Fraction(len(cert.kept_s), m) == g_h / 2,
              "pre-filter density differs from gamma/2")
    else:
        q = len(cert.hs)
        check(len(cert.kept_s) * q * q >= m, "pre-filter size below |G|/q^2")

    # survivors and matchings
    mask = _beta_mask(cert)
    counts = tuple(sum(row) for row in mask)
    check(counts == cert.beta_nonzero_count,
          "beta_nonzero_count differs from recomputed survivors")
    total = cert.family.t * len(cert.kept_s)
    survivors = sum(counts)
    if field.char:
        check(survivors * field.char >= (field.char - 1) * total,
              "surviving fraction below 1 - 1/|F|")
    else:
        check(survivors == total, "rational certificate lost tuples")
    expected_matchings = []
    for j, g in enumerate(cert.family.g_refs):
        gj_perm = group.left_perm(g)
        sets = []
        for si, s in enumerate(cert.kept_s):
            if not mask[j][si]:
                continue
            if cert.kind == "lambda":
                sets.append(tuple(sorted((
                    int(gj_perm[h_perms[0][s]]), m + int(gj_perm[s])
                ))))
            else:
                sets.append(tuple(sorted(
                    int(gj_perm[perm[s]]) for perm in h_perms
                )))
        expected_matchings.append(tuple(sorted(sets)))
    actual_matchings = tuple(
        tuple(sorted(mi.sets)) for mi in cert.code.matchings
    )
    check(tuple(expected_matchings) == actual_matchings,
          "code matchings differ from the filtered tuple family")

    check(orbit_projection_check(cert), "code vectors are not W^T rho(s) z")
    try:
        check_spanning_identities(cert)
    except Rep2LdcError as exc:
        failures.append(f"tuple identity failed: {exc}")

    m_code = 2 * m if cert.kind == "lambda" else m
    check(cert.code.m == m_code, "code length differs from group size")
    check(
        cert.achieved_delta == Fraction(survivors, m_code * cert.family.t),
        "achieved_delta differs from matching counts",
    )
    th = field.theta
    if cert.kind == "special2":
        floor = th * gamma(group.element_order(cert.hs[0])) / 2
    elif cert.kind == "lambda":
        floor = th * gamma(group.element_order(cert.hs[0])) / 4
    else:
        floor = th / (len(cert.hs) ** 2)
    check(cert.achieved_delta >= floor, "achieved_delta below the guaranteed floor")
    check(cert.code.claimed_delta == floor, "claimed_delta differs from the guaranteed floor")

    code_report = verify(cert.code)
    audit = None
    if cert.code.form == "special2":
        try:
            audit = entropy_audit(cert.code)
        except Rep2LdcError as exc:
            failures.append(f"entropy audit failed: {exc}")
    return CertCheckReport(
        kind=cert.kind,
        failures=tuple(failures),
        code_report=code_report,
        audit=audit,
    )


def verify_cert_json(obj) -> CertCheckReport:
    return verify_cert(cert_from_json(obj))
