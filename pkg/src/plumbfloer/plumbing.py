"""Seifert and Brieskorn data, star-shaped plumbing graphs and their forms."""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Sequence

from . import linalg
from .errors import ConsistencyError, ParseError, PreconditionError
from .exact import NegContFrac, as_fraction, nc_eval, nc_expand

__all__ = [
    "SeifertData",
    "BrieskornData",
    "StarGraph",
    "IntersectionForm",
    "Definiteness",
    "TorusLinkResult",
    "brieskorn_to_seifert",
    "seifert_to_graph",
    "euler_number",
    "is_negative_definite",
    "intersection_form",
    "torus_link_to_seifert",
    "parse_rational",
]

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer.  Decimals are rejected on purpose."""
    m = _RATIONAL.match(text)
    if not m:
        raise ParseError(f"not a rational literal of the form p/q: {text!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def _sort_key(r: Fraction):
    # descending value; equal values are equal reduced fractions
    return (-r, r.numerator, r.denominator)


@dataclass(frozen=True)
class SeifertData:
    """``M(e0; r1, ..., rn)`` with the coefficients sorted descending."""

    e0: int
    coeffs: tuple[Fraction, ...]
    allow_negative: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        rs = tuple(sorted((as_fraction(r) for r in self.coeffs), key=_sort_key))
        object.__setattr__(self, "e0", int(self.e0))
        object.__setattr__(self, "coeffs", rs)
        for r in rs:
            if r == 0:
                raise PreconditionError("Seifert coefficients must be non-zero")
            if not self.allow_negative and not 0 < r < 1:
                raise PreconditionError(f"Seifert coefficient {r} outside (0, 1)")

    @classmethod
    def parse(cls, text: str) -> "SeifertData":
        """Parse ``"e0; r1, r2, ..."``."""
        head, sep, tail = text.partition(";")
        if not sep:
            raise ParseError(f"expected 'e0; r1, r2, ...', got {text!r}")
        e0 = parse_rational(head)
        if e0.denominator != 1:
            raise ParseError("e0 must be an integer")
        coeffs = [parse_rational(t) for t in tail.split(",") if t.strip()]
        return cls(int(e0), tuple(coeffs))

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @property
    def has_ties(self) -> bool:
        """True when the descending order needed a tie-break convention."""
        return len(set(self.coeffs)) != len(self.coeffs)

    def __str__(self):
        return f"{self.e0}; " + ", ".join(str(r) for r in self.coeffs)


@dataclass(frozen=True)
class BrieskornData:
    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(a) for a in self.exponents)
        object.__setattr__(self, "exponents", exps)
        if len(exps) < 2:
            raise PreconditionError("a Brieskorn sphere needs at least two exponents")
        if any(a < 2 for a in exps):
            raise PreconditionError("Brieskorn exponents must be >= 2")
        for i, a in enumerate(exps):
            for b in exps[i + 1 :]:
                if math.gcd(a, b) != 1:
                    raise PreconditionError(f"exponents {a} and {b} are not coprime")

    @classmethod
    def parse(cls, text: str) -> "BrieskornData":
        try:
            exps = tuple(int(t) for t in text.replace(" ", "").split(",") if t)
        except ValueError as exc:
            raise ParseError(f"bad Brieskorn exponents {text!r}") from exc
        return cls(exps)

    def __str__(self):
        return "Σ(" + ",".join(map(str, self.exponents)) + ")"


@dataclass(frozen=True)
class StarGraph:
    """Star-shaped plumbing tree.

    Vertex 0 is the central vertex; the vertices of leg ``i`` follow in order
    of increasing distance from the centre.  ``leaf`` is the (0-based) vertex
    carrying the unlabelled meridian.
    """

    central: int
    legs: tuple[NegContFrac, ...] = ()
    leaf: int = 0

    def __post_init__(self):
        legs = tuple(l if isinstance(l, NegContFrac) else NegContFrac(tuple(l)) for l in self.legs)
        object.__setattr__(self, "legs", legs)
        object.__setattr__(self, "central", int(self.central))
        for leg in legs:
            if len(leg) == 0 or not leg.is_canonical():
                raise PreconditionError(f"leg framings must be <= -2, got {leg}")
        if not 0 <= self.leaf < self.n_vertices:
            raise PreconditionError(f"leaf vertex {self.leaf} does not exist")

    @cached_property
    def framings(self) -> tuple[int, ...]:
        out = [self.central]
        for leg in self.legs:
            out.extend(leg.terms)
        return tuple(out)

    @cached_property
    def parents(self) -> tuple[int, ...]:
        out = [-1]
        for leg in self.legs:
            prev = 0
            for _ in leg:
                out.append(prev)
                prev = len(out) - 1
        return tuple(out)

    @cached_property
    def leg_vertices(self) -> tuple[tuple[int, ...], ...]:
        out, k = [], 1
        for leg in self.legs:
            out.append(tuple(range(k, k + len(leg))))
            k += len(leg)
        return tuple(out)

    @property
    def n_vertices(self) -> int:
        return 1 + sum(len(l) for l in self.legs)

    @property
    def leaf_is_central(self) -> bool:
        return self.leaf == 0

    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(-1 / nc_eval(leg) for leg in self.legs)

    def euler(self) -> Fraction:
        return self.central + sum(self.coefficients(), Fraction(0))

    # serialisation -------------------------------------------------------
    def to_text(self) -> str:
        legs = " | ".join("[" + ",".join(str(t) for t in leg) + "]" for leg in self.legs)
        text = f"{self.central}; {legs}" if legs else f"{self.central};"
        return text if self.leaf == 0 else f"{text} @{self.leaf}"

    @classmethod
    def from_text(cls, text: str) -> "StarGraph":
        """Inverse of :meth:`to_text`: ``"e0; [m11,m12] | [m21] @leaf"``."""
        body, _, leaf = text.partition("@")
        head, sep, tail = body.partition(";")
        try:
            central = int(head.strip())
            legs = []
            if sep and tail.strip():
                for chunk in tail.split("|"):
                    chunk = chunk.strip()
                    if not (chunk.startswith("[") and chunk.endswith("]")):
                        raise ValueError(chunk)
                    legs.append(NegContFrac(tuple(int(t) for t in chunk[1:-1].split(","))))
            leaf_idx = int(leaf) if leaf.strip() else 0
        except ValueError as exc:
            raise ParseError(f"bad graph text {text!r}") from exc
        return cls(central, tuple(legs), leaf_idx)

    def to_json(self) -> dict:
        return {"central": self.central, "legs": [list(l.terms) for l in self.legs], "leaf": self.leaf}

    @classmethod
    def from_json(cls, obj) -> "StarGraph":
        if isinstance(obj, str):
            try:
                obj = json.loads(obj)
            except json.JSONDecodeError as exc:
                raise ParseError(str(exc)) from exc
        try:
            return cls(int(obj["central"]), tuple(NegContFrac(tuple(l)) for l in obj["legs"]), int(obj.get("leaf", 0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad graph JSON: {exc}") from exc

    @cached_property
    def form(self) -> "IntersectionForm":
        return intersection_form(self)


class IntersectionForm:
    """Symmetric integer matrix ``Q`` with exact inverse and determinant."""

    def __init__(self, Q, tree: linalg.TreeFactor | None = None):
        self.Q = linalg.as_matrix(Q)
        if not linalg.is_symmetric(self.Q):
            raise PreconditionError("intersection form must be symmetric")
        self._tree = tree
        self.n = len(self.Q)
        self.det = tree.det if tree is not None else linalg.det(self.Q)
        if self.det == 0:
            raise PreconditionError("intersection form is singular")

    @property
    def framings(self) -> tuple[int, ...]:
        return tuple(self.Q[i][i] for i in range(self.n))

    @cached_property
    def Qinv(self) -> tuple[tuple[Fraction, ...], ...]:
        if self._tree is not None:
            cols = [self._tree.solve([int(i == j) for i in range(self.n)]) for j in range(self.n)]
            return tuple(tuple(cols[j][i] for j in range(self.n)) for i in range(self.n))
        return linalg.inverse(self.Q)

    def solve(self, b) -> tuple[Fraction, ...]:
        """``Q^{-1} b``."""
        if self._tree is not None:
            return self._tree.solve(b)
        return linalg.matvec(self.Qinv, b)

    def pairing(self, u, v) -> Fraction:
        """The rational form ``u^T Q^{-1} v``."""
        return linalg.dot(u, self.solve(v))

    def negative_definite(self) -> bool:
        if self._tree is not None:
            return self._tree.negative_definite()
        return linalg.is_negative_definite(self.Q)

    def sylvester(self) -> bool:
        return linalg.is_negative_definite(self.Q)

    def __repr__(self):
        return f"IntersectionForm(n={self.n}, det={self.det})"


def brieskorn_to_seifert(b: BrieskornData) -> SeifertData:
    """Unique ``(e0; b_i/a_i)`` with ``sum r_i = -e0 - 1/(a_1...a_n)``."""
    exps = b.exponents
    A = reduce(lambda x, y: x * y, exps)
    coeffs = []
    for a in exps:
        cof = A // a
        bi = (-pow(cof, -1, a)) % a
        coeffs.append(Fraction(bi, a))
    total = sum(coeffs, Fraction(0)) + Fraction(1, A)
    if total.denominator != 1:
        raise ConsistencyError("Brieskorn congruence produced non-integral e0", exponents=exps)
    return SeifertData(-total.numerator, tuple(coeffs))


def seifert_to_graph(s: SeifertData, leaf: int = 0) -> StarGraph:
    for r in s.coeffs:
        if not 0 < r < 1:
            raise PreconditionError(f"coefficient {r} outside (0, 1) has no standard leg")
    return StarGraph(s.e0, tuple(nc_expand(-1 / r) for r in s.coeffs), leaf)


def euler_number(s: SeifertData) -> Fraction:
    return s.e0 + sum(s.coeffs, Fraction(0))


@dataclass(frozen=True)
class Definiteness:
    euler: Fraction
    by_euler: bool
    by_sylvester: bool

    def __bool__(self):
        return self.by_euler


def is_negative_definite(g: StarGraph) -> Definiteness:
    """``e(M) < 0``, checked against Sylvester's criterion on ``Q``."""
    e = g.euler()
    by_euler = e < 0
    by_sylvester = linalg.is_negative_definite(intersection_form(g).Q)
    if by_euler != by_sylvester:
        raise ConsistencyError(
            "Euler-number and Sylvester definiteness tests disagree",
            graph=g.to_text(),
            euler=str(e),
        )
    return Definiteness(e, by_euler, by_sylvester)


def intersection_form(g: StarGraph) -> IntersectionForm:
    n = g.n_vertices
    Q = [[0] * n for _ in range(n)]
    for v, (m, p) in enumerate(zip(g.framings, g.parents)):
        Q[v][v] = m
        if p >= 0:
            Q[v][p] = Q[p][v] = 1
    tree = linalg.TreeFactor(g.framings, g.parents)
    return IntersectionForm(Q, tree)


@dataclass(frozen=True)
class TorusLinkResult:
    seifert: SeifertData
    euler: Fraction
    det_lambda: int
    det_d: int
    hypothesis: str


def _torus_knot_coeffs(p: int, q: int, sign: int) -> tuple[Fraction, Fraction]:
    # b1/p + b2/q = 1 - sign/(pq)
    b1 = (-sign * pow(q, -1, p)) % p
    b2 = (-sign * pow(p, -1, q)) % q
    return Fraction(b1, p), Fraction(b2, q)


def torus_link_to_seifert(p: int, q: int, sign: int, lam: Sequence[Sequence[int]]) -> TorusLinkResult:
    """Seifert invariants of surgery on ``T(kp, sign*kq)`` with matrix ``lam``.

    ``lam = D + sign*pq*E`` with ``D`` diagonal; the extra coefficients are
    ``-1/D_ii`` and may be negative when ``sign == -1``.
    """
    if sign not in (1, -1):
        raise PreconditionError("sign must be +1 or -1")
    if math.gcd(p, q) != 1 or not 1 <= p <= q:
        raise PreconditionError("need coprime 1 <= p <= q")
    if p == 1:
        raise PreconditionError("p = 1 gives an unknotted pattern with no singular fibre of order p")
    lam = linalg.as_matrix(lam)
    k = len(lam)
    if k < 1 or not linalg.is_symmetric(lam):
        raise PreconditionError("surgery matrix must be a non-empty symmetric square matrix")
    pq = p * q
    for i in range(k):
        for j in range(k):
            if i != j and lam[i][j] != sign * pq:
                raise PreconditionError(
                    f"off-diagonal entry lam[{i}][{j}] = {lam[i][j]} is not the linking number {sign * pq}"
                )
    dvals = [lam[i][i] - sign * pq for i in range(k)]
    if any(d == 0 for d in dvals):
        raise PreconditionError("diagonal of D vanishes: the surgery is not Seifert with this presentation")
    det_lam = linalg.det(lam)
    if sign == 1:
        if not linalg.is_negative_definite(lam):
            raise PreconditionError("positive torus link: surgery matrix is not negative-definite")
        hypothesis = "lam negative-definite"
    else:
        bad = [i for i in range(k) if not lam[i][i] > -pq]
        if bad:
            raise PreconditionError(f"negative torus link: lam[{bad[0]}][{bad[0]}] <= -pq = {-pq}")
        if not det_lam < 0:
            raise PreconditionError(f"negative torus link: det(lam) = {det_lam} is not < 0")
        hypothesis = "lam_ii > -pq and det(lam) < 0"
    r1, r2 = _torus_knot_coeffs(p, q, sign)
    extra = [Fraction(-1, d) for d in dvals]
    det_d = reduce(lambda x, y: x * y, dvals)
    if Fraction(det_lam) != det_d * (1 - sign * pq * sum(extra, Fraction(0))):
        raise ConsistencyError("determinant identity for D + pqE failed", lam=lam)
    s = SeifertData(-1, (r1, r2, *extra), allow_negative=True)
    e = euler_number(s)
    if not e < 0:
        raise ConsistencyError("hypothesis holds but e(M) >= 0", lam=lam, euler=str(e))
    return TorusLinkResult(s, e, det_lam, det_d, hypothesis)
