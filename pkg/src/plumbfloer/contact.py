"""Twisting numbers, tight-structure counts, blown-down surgery presentations
and the spin / embedding obstructions for negative-definite Seifert spaces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import ConsistencyError, PreconditionError
from .exact import EvaluationError, farey_mediant_search, nc_eval, truncated_value
from .filtration import canonical_vector, height_of_class
from .fullpath import HFBasis, hf_basis, run_full_path
from .plumbing import BrieskornData, SeifertData, StarGraph, brieskorn_to_seifert, euler_number, seifert_to_graph
from .spinc import SpincClass, is_characteristic, maslov_grading, spinc_class_of, spinc_classes

__all__ = [
    "EllPair",
    "TwistingResult",
    "Component",
    "SurgeryPresentation",
    "SpinReport",
    "ObstructionReport",
    "ell_pair",
    "sharp",
    "twisting_number_height",
    "twisting_number_farey",
    "twisting_conditions",
    "count_tight",
    "fillable_bound",
    "blow_down",
    "blown_down_presentation",
    "spin_obstruction",
    "embedding_obstruction",
    "brieskorn_embedding_report",
]


def _require_negative_definite(s: SeifertData):
    e = euler_number(s)
    if not e < 0:
        raise PreconditionError(f"M({s}) has e(M) = {e} >= 0: standard graph is not negative-definite")
    return e


def _leg(r: Fraction) -> tuple[int, ...]:
    return seifert_to_graph(SeifertData(-2, (r,))).legs[0].terms


# ---------------------------------------------------------------------------
# truncation pair and #
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EllPair:
    l1: int
    l2: int
    branch: int  # 1: "+1" on the first truncation, 2: on the second
    ties: tuple[tuple[int, int, int], ...] = ()

    def __iter__(self):
        return iter((self.l1, self.l2))


def _check_pair(r1, r2):
    r1, r2 = Fraction(r1), Fraction(r2)
    if not (0 < r2 <= r1 < 1):
        raise PreconditionError("need 0 < r2 <= r1 < 1")
    if r1 + r2 >= 1:
        raise PreconditionError(f"r1 + r2 = {r1 + r2} >= 1: not negative-definite for e0 = -1")
    return r1, r2


def ell_pair(r1, r2) -> EllPair:
    """Longest truncations with ``[0,..,m+1] + [0,..] = 1`` (either leg bumped).

    Exhaustive over all truncation lengths; maximises ``i1 + i2`` and keeps
    every maximiser in ``ties``.
    """
    r1, r2 = _check_pair(r1, r2)
    leg1, leg2 = _leg(r1), _leg(r2)

    def value(leg, i, bump):
        try:
            return truncated_value(leg, i, bump)
        except EvaluationError:
            return None

    plain1 = [value(leg1, i, False) for i in range(len(leg1) + 1)]
    bump1 = [value(leg1, i, True) for i in range(len(leg1) + 1)]
    plain2 = [value(leg2, i, False) for i in range(len(leg2) + 1)]
    bump2 = [value(leg2, i, True) for i in range(len(leg2) + 1)]
    sols = []
    for i1 in range(len(leg1) + 1):
        for i2 in range(len(leg2) + 1):
            for branch, a, b in ((1, bump1[i1], plain2[i2]), (2, plain1[i1], bump2[i2])):
                if a is not None and b is not None and a + b == 1:
                    sols.append((i1, i2, branch))
    if not sols:
        raise ConsistencyError("no truncation pair solves the defining identity", r1=str(r1), r2=str(r2))
    best = max(i1 + i2 for i1, i2, _ in sols)
    top = sorted(s for s in sols if s[0] + s[1] == best)
    i1, i2, branch = top[0]
    # the same pair may satisfy both lines; only distinct pairs count as ties
    distinct = sorted({(a, b) for a, b, _ in top})
    return EllPair(i1, i2, branch, tuple(top) if len(distinct) > 1 else ())


def _truncation_denominators(r1, r2, ell: EllPair) -> tuple[int, int]:
    d1 = truncated_value(_leg(Fraction(r1)), ell.l1).denominator
    d2 = truncated_value(_leg(Fraction(r2)), ell.l2).denominator
    return d1, d2


def sharp(r1, r2) -> int:
    """Number of central steps: ``denom[0,m^1..] + denom[0,m^2..] - 1``."""
    r1, r2 = _check_pair(r1, r2)
    d1, d2 = _truncation_denominators(r1, r2, ell_pair(r1, r2))
    return d1 + d2 - 1


# ---------------------------------------------------------------------------
# twisting number, two routes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwistingResult:
    q: int
    method: str
    witnesses: dict = field(default_factory=dict, compare=False)

    @property
    def tw(self) -> int:
        return -self.q


def twisting_number_height(s: SeifertData) -> TwistingResult:
    """``tw = -1 - height[V_can]``, with the closed form ``-1`` / ``-1 - #``."""
    _require_negative_definite(s)
    if s.n < 2:
        raise PreconditionError("twisting number needs at least two singular fibres")
    g = seifert_to_graph(s)
    out = run_full_path(canonical_vector(g.form), g.form)
    if not out.ends_correctly:
        raise ConsistencyError("full path of V_can drops out", graph=g.to_text())
    h = height_of_class(out, g.form)
    wit = {"height": h.value, "n_steps": out.n_steps}
    if s.e0 < -1:
        q = 1
    else:
        r1, r2 = s.coeffs[0], s.coeffs[1]
        ell = ell_pair(r1, r2)
        num = sharp(r1, r2)
        q = 1 + num
        wit.update(sharp=num, ell=(ell.l1, ell.l2))
    if 1 + h.value != q:
        raise ConsistencyError(
            "closed-form twisting number disagrees with the height of V_can",
            seifert=str(s),
            q=q,
            height=h.value,
        )
    return TwistingResult(q, "height", wit)


def _p_values(s: SeifertData, q: int) -> list[int]:
    # ceil(q r) off exact division and q r + 1 on it are both floor(q r) + 1
    ps = [q * r.numerator // r.denominator + 1 for r in s.coeffs]
    if q == 1 and s.e0 < -2:
        ps[-1] = -s.e0 - 1
    return ps


def twisting_conditions(s: SeifertData, q: int, ps: Sequence[int] | None = None) -> tuple[bool, list[int], str]:
    """Check the three numerical conditions for twisting ``-q``.

    Returns ``(ok, p, reason)``; ``p`` defaults to the forced choice
    ``ceil(q r_i)`` (``q r_i + 1`` on exact division).
    """
    ps = list(ps) if ps is not None else _p_values(s, q)
    n = s.n
    for r, p in zip(s.coeffs, ps):
        a, b = r.numerator, r.denominator
        if p < 1 or p * b <= q * a:
            return False, ps, f"p/q = {p}/{q} is not above r = {r}"
        if math.gcd(p, q) != 1:
            return False, ps, f"gcd({p}, {q}) != 1"
    if sum(ps) != -s.e0 * q + n - 2:
        return False, ps, f"sum p = {sum(ps)} != {-s.e0 * q + n - 2}"
    for r, p in zip(s.coeffs, ps):
        a, b = r.numerator, r.denominator
        for h in range(1, q):
            # smallest fraction k/h above r
            k = h * a // b + 1
            if k <= p and k * q < p * h:
                return False, ps, f"{k}/{h} lies in ({r}, {p}/{q})"
    return True, ps, ""


def farey_search_bound(s: SeifertData) -> int:
    r1, r2 = s.coeffs[0], s.coeffs[1]
    a_sum = r1.denominator + r2.denominator
    gap = 1 - r1 - r2
    if s.e0 == -1 and gap > 0:
        return min(math.ceil(1 / gap), a_sum)
    return a_sum


def twisting_number_farey(s: SeifertData) -> TwistingResult:
    """Brute-force the numerical conditions over ``q = 1 .. bound``."""
    _require_negative_definite(s)
    if s.n < 2:
        raise PreconditionError("twisting number needs at least two singular fibres")
    bound = farey_search_bound(s)
    found = []
    for q in range(1, bound + 1):
        ok, ps, _ = twisting_conditions(s, q)
        if ok:
            found.append((q, tuple(ps)))
    if not found:
        raise ConsistencyError("no twisting number satisfies the numerical conditions", seifert=str(s), bound=bound)
    if len(found) > 1:
        raise ConsistencyError("twisting number is not unique", seifert=str(s), solutions=found)
    q, ps = found[0]
    wit = {"p": ps, "bound": bound}
    if s.e0 == -1 and s.coeffs[0] >= Fraction(1, 2):
        pair, q2, p1 = farey_mediant_search(s.coeffs[0], s.coeffs[1])
        if (q2, p1) != (q, ps[0]):
            raise ConsistencyError("Farey descent disagrees with brute force", seifert=str(s), descent=(q2, p1))
        wit["pair"] = (pair.left, pair.right)
    return TwistingResult(q, "farey", wit)


# ---------------------------------------------------------------------------
# counts
# ---------------------------------------------------------------------------


def count_tight(s: SeifertData) -> int:
    """``|e0 + 1| * prod |m_j^i + 1|`` for ``e0 < -1``."""
    _require_negative_definite(s)
    if s.e0 >= -1:
        raise PreconditionError("closed count is only available for e0 < -1")
    total = abs(s.e0 + 1)
    for r in s.coeffs:
        for m in _leg(r):
            total *= abs(m + 1)
    return total


def fillable_bound(s: SeifertData, basis: HFBasis | None = None) -> int:
    """Correctly-ending full-path classes: an upper bound, not a count."""
    _require_negative_definite(s)
    basis = basis or hf_basis(seifert_to_graph(s))
    return basis.n_classes


# ---------------------------------------------------------------------------
# blow-downs and surgery presentations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlowDown:
    remaining: tuple[int, ...]
    matrix: linalg.Matrix
    exceptional: tuple[tuple[int, ...], ...]
    basis: tuple[tuple[int, ...], ...]


def blow_down(Q, vertices: Sequence[int]) -> BlowDown:
    """Blow down the given vertices of a plumbing, one ``-1`` at a time.

    Tracks each surviving basis class and each exceptional sphere in the
    original vertex basis.
    """
    n = len(Q)
    G = [list(row) for row in Q]
    basis = [[int(i == j) for j in range(n)] for i in range(n)]
    alive = list(range(n))
    pending = set(vertices)
    exceptional = []
    while pending:
        u = next((v for v in sorted(pending) if G[v][v] == -1), None)
        if u is None:
            raise ConsistencyError("blow-down stuck: no -1 vertex left", remaining=sorted(pending), matrix=G)
        rest = [a for a in alive if a != u]
        col = {a: G[a][u] for a in rest}
        for a in rest:
            if col[a]:
                for c in rest:
                    G[a][c] += col[a] * col[c]
                basis[a] = [x + col[a] * y for x, y in zip(basis[a], basis[u])]
        exceptional.append(tuple(basis[u]))
        alive = rest
        pending.discard(u)
    return BlowDown(
        tuple(alive),
        tuple(tuple(G[a][c] for c in alive) for a in alive),
        tuple(exceptional),
        tuple(tuple(basis[a]) for a in alive),
    )


@dataclass(frozen=True)
class Component:
    name: str
    knot: tuple[int, int] | None  # torus knot type, None for an unknot
    coefficients: tuple[int, ...]
    framings: tuple[int, ...]
    leg: int


@dataclass
class SurgeryPresentation:
    case: str
    seifert: SeifertData
    components: list[Component]
    linking: linalg.Matrix
    gamma: int
    gamma_prime: int
    det_q: int
    q: int | None = None
    p: int | None = None
    ell: EllPair | None = None
    d1: int | None = None
    d2: int | None = None
    T: int | None = None
    mu: tuple[int, int] | None = None
    blowdown: BlowDown | None = None
    flags: list[str] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.linking)

    @property
    def even(self) -> bool:
        return all(self.linking[i][i] % 2 == 0 for i in range(self.size))

    @property
    def matches_blowdown(self) -> bool | None:
        return None if self.blowdown is None else self.blowdown.matrix == self.linking

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "seifert": str(self.seifert),
            "q": self.q,
            "p": self.p,
            "ell": None if self.ell is None else [self.ell.l1, self.ell.l2],
            "branch": None if self.ell is None else self.ell.branch,
            "d1": self.d1,
            "d2": self.d2,
            "T": self.T,
            "mu": None if self.mu is None else list(self.mu),
            "components": [
                {
                    "name": c.name,
                    "knot": None if c.knot is None else list(c.knot),
                    "coefficients": list(c.coefficients),
                    "framings": list(c.framings),
                }
                for c in self.components
            ],
            "linking": [list(r) for r in self.linking],
            "gamma": self.gamma,
            "gamma_prime": self.gamma_prime,
            "det_q": self.det_q,
            "matches_blowdown": self.matches_blowdown,
            "flags": list(self.flags),
        }


def _torus_tb(knot) -> int:
    if knot is None:
        return -1
    a, b = knot
    return a * b - a - b


def _assemble(components: list[Component], links: dict) -> linalg.Matrix:
    idx, heads = [], []
    for ci, comp in enumerate(components):
        heads.append(len(idx))
        idx.extend((ci, j) for j in range(len(comp.framings)))
    n = len(idx)
    L = [[0] * n for _ in range(n)]
    for a, (ci, j) in enumerate(idx):
        L[a][a] = components[ci].framings[j]
        if j > 0:
            L[a][a - 1] = L[a - 1][a] = 1
    for (ci, cj), lk in links.items():
        a, b = heads[ci], heads[cj]
        L[a][b] = L[b][a] = lk
    return linalg.as_matrix(L)


def _validate(pres: SurgeryPresentation, Q) -> SurgeryPresentation:
    L = pres.linking
    expected = pres.gamma - pres.gamma_prime
    if pres.size != expected:
        raise ConsistencyError("presentation has the wrong number of components", size=pres.size, expected=expected)
    rk = linalg.rank(L) if L else 0
    dl = linalg.det(L) if L else 1
    if rk != expected or abs(dl) != abs(pres.det_q):
        raise ConsistencyError(
            "linking matrix fails determinant/rank validation",
            linking=L,
            intersection_form=Q,
            det_linking=dl,
            det_q=pres.det_q,
            rank=rk,
        )
    return pres


def blown_down_presentation(s: SeifertData) -> SurgeryPresentation:
    """Surgery presentation obtained by blowing down the standard graph."""
    _require_negative_definite(s)
    g = seifert_to_graph(s)
    Q = g.form.Q
    n_gamma = g.n_vertices
    det_q = g.form.det
    if s.e0 < -1:
        comps = [Component("centre", None, (s.e0,), (s.e0,), -1)]
        comps += [Component(f"leg{i + 1}", None, leg.terms, leg.terms, i) for i, leg in enumerate(g.legs)]
        pres = SurgeryPresentation("standard", s, comps, Q, n_gamma, 0, det_q, q=1)
        pres.blowdown = blow_down(Q, ())
        return _validate(pres, Q)
    if s.n < 2:
        raise PreconditionError("e0 = -1 presentations need at least two singular fibres")

    r1, r2 = s.coeffs[0], s.coeffs[1]
    legs = [leg.terms for leg in g.legs]
    ell = ell_pair(r1, r2)
    l1, l2 = ell.l1, ell.l2
    d1, d2 = _truncation_denominators(r1, r2, ell)
    q = d1 + d2
    bumped = legs[ell.branch - 1][: (l1, l2)[ell.branch - 1]]
    T = 0
    for m in reversed(bumped):
        if m != -2:
            break
        T += 1
    if l2 == 0:
        mu = (-2, -l1 - 2)
        case = "cable_T22"
    elif ell.branch == 1:
        mu = (-2, -3 - T)
        case = "cable_T33"
    else:
        mu = (-3 - T, -2)
        case = "cable_T33"

    # background slopes: [0, m_1..m_l, mu] = p/q and (q - p)/q
    p_frac = nc_eval((0, *legs[0][:l1], mu[0]))
    p2_frac = nc_eval((0, *legs[1][:l2], mu[1]))
    p = p_frac * q
    if p.denominator != 1 or p2_frac != 1 - p_frac:
        raise ConsistencyError(
            "background slopes do not match the truncated expansions",
            seifert=str(s),
            mu=mu,
            slopes=(str(p_frac), str(p2_frac)),
        )

    flags = ["cable components pairwise linked d1*d2 (checked via det/rank only)"]
    comps: list[Component] = []
    cable_knot = (d1, d2) if min(d1, d2) > 1 else None
    first_cable_leg = 1 if l2 == 0 else 2
    for i, (leg, l, m) in enumerate(((legs[0], l1, mu[0]), (legs[1], l2, mu[1]))):
        if i >= first_cable_leg or l == len(leg):
            continue
        coeffs = (leg[l] - m - 1, *leg[l + 1 :])
        comps.append(Component(f"torus{i + 1}", None, coeffs, coeffs, i))
    for i in range(first_cable_leg, s.n):
        leg = legs[i]
        coeffs = (leg[0] + q - 1, *leg[1:])
        head = coeffs[0] + _torus_tb(cable_knot) + 1
        comps.append(Component(f"cable{i + 1}", cable_knot, coeffs, (head, *coeffs[1:]), i))

    links = {}
    for a, ca in enumerate(comps):
        for b in range(a + 1, len(comps)):
            cb = comps[b]
            kinds = {ca.name[:5], cb.name[:5]}
            if kinds == {"torus"}:
                lk = 1
            elif kinds == {"cable"}:
                lk = d1 * d2
            else:
                torus = ca if ca.name.startswith("torus") else cb
                lk = d2 if torus.leg == 0 else d1
            links[(a, b)] = lk
    L = _assemble(comps, links)
    n_prime = 1 + l1 + l2
    pres = SurgeryPresentation(
        case, s, comps, L, n_gamma, n_prime, det_q, q=q, p=int(p), ell=ell, d1=d1, d2=d2, T=T, mu=mu, flags=flags
    )
    gamma_prime = [0, *g.leg_vertices[0][:l1], *g.leg_vertices[1][:l2]]
    pres.blowdown = blow_down(Q, gamma_prime)
    if ell.ties:
        flags.append(f"several maximal truncation pairs: {list(ell.ties)}")
    return _validate(pres, Q)


# ---------------------------------------------------------------------------
# obstructions
# ---------------------------------------------------------------------------


@dataclass
class SpinReport:
    spinc: tuple[int, ...]
    spin: bool
    even_form: bool
    gamma: int
    gamma_prime: int
    d: Fraction
    d3: Fraction | None
    self_conjugate_class: tuple[int, ...] | None
    verdict: str


def _self_conjugate_vector(Q, bd: BlowDown) -> tuple[int, ...]:
    """Characteristic vector of ``c_1 = 0`` on the blow-down, ``+1`` on each exceptional sphere."""
    rows = list(bd.basis) + list(bd.exceptional)
    target = [0] * len(bd.basis) + [1] * len(bd.exceptional)
    inv = linalg.inverse(rows)
    sol = linalg.matvec(inv, target)
    if any(x.denominator != 1 for x in sol):
        raise ConsistencyError("blow-down basis is not unimodular")
    return tuple(int(x) for x in sol)


def _graph_and_presentation(x):
    if isinstance(x, StarGraph):
        if x.legs:
            s = SeifertData(x.central, x.coefficients())
        else:
            s = SeifertData(x.central, ())
    else:
        s = x
    return s, seifert_to_graph(s), blown_down_presentation(s)


def spin_obstruction(x, spinc: SpincClass | None = None, basis: HFBasis | None = None) -> SpinReport:
    """Parity of the blown-down form and the resulting spin verdict.

    ``x`` is a :class:`SeifertData` or a star graph.  Without ``spinc`` the
    self-conjugate class of an even form (or the first spin class) is used.
    """
    s, g, pres = _graph_and_presentation(x)
    if pres.size == 0:
        raise PreconditionError("the graph blows down completely: M is S^3")
    basis = basis or hf_basis(g)
    form = g.form
    xi_class = None
    d3 = None
    if pres.even:
        v = _self_conjugate_vector(form.Q, pres.blowdown)
        if not is_characteristic(v, form):
            raise ConsistencyError("even blow-down produced a non-characteristic vector", vector=v)
        d3 = Fraction(pres.gamma - pres.gamma_prime, 4)
        if maslov_grading(v, form) != d3:
            raise ConsistencyError("grading of the self-conjugate vector is not d3", vector=v)
        xi_class = spinc_class_of(v, form)
        if not xi_class.is_spin:
            raise ConsistencyError("self-conjugate structure induces a non-spin class", vector=v)
    if spinc is None:
        spin_classes = [c for c in spinc_classes(form) if c.is_spin]
        spinc = xi_class if xi_class is not None else spin_classes[0]
    if not spinc.is_spin:
        raise PreconditionError(f"Spin^c class {spinc.representative} is not spin")
    d = basis[spinc].d
    if not pres.even:
        verdict = "odd form: no self-conjugate fillable structure, so c+(xi) != Theta+ for every fillable xi"
    elif spinc != xi_class:
        verdict = "even form, but the self-conjugate structure lives in another spin class"
    else:
        if not d >= d3 > 0:
            raise ConsistencyError("d < d3 for the self-conjugate class", d=str(d), d3=str(d3))
        verdict = f"even form: d = {d} >= d3 = {d3} > 0"
    return SpinReport(
        spinc.representative,
        True,
        pres.even,
        pres.gamma,
        pres.gamma_prime,
        d,
        d3,
        None if xi_class is None else xi_class.representative,
        verdict,
    )


@dataclass
class ObstructionReport:
    subject: str
    spinc: tuple[int, ...]
    spin: bool
    d: Fraction
    dim_hf_hat_at_d: int
    convex_criterion: bool
    even_form: bool | None = None
    d3: Fraction | None = None
    stages: list[tuple[str, bool, str]] = field(default_factory=list)
    obstructed: bool = False
    failed_stage: str | None = None

    def summary(self) -> str:
        if not self.obstructed:
            return f"not obstructed (d={self.d}; dim HF-hat_d = {self.dim_hf_hat_at_d})"
        reason = next(msg for name, ok, msg in self.stages if name == self.failed_stage)
        return f"obstructed (d={self.d}; {reason})"


def _stage(report: ObstructionReport, name: str, ok: bool, msg: str):
    report.stages.append((name, ok, msg))
    if not ok and not report.obstructed:
        report.obstructed = True
        report.failed_stage = name


def embedding_obstruction(
    s: SeifertData, spinc: SpincClass | None = None, basis: HFBasis | None = None
) -> list[ObstructionReport]:
    """Convex-embedding criterion ``dim HF-hat_d = 1`` for each (or one) class."""
    _require_negative_definite(s)
    basis = basis or hf_basis(seifert_to_graph(s))
    targets = [spinc] if spinc is not None else [b.spinc for b in basis]
    out = []
    for t in targets:
        b = basis[t]
        dim = sum(1 for c in b.classes if c.maslov == b.d)
        rep = ObstructionReport(str(s), t.representative, t.is_spin, b.d, dim, dim == 1)
        _stage(rep, "convex criterion", dim == 1, f"dim HF-hat_d = {dim}" + ("" if dim == 1 else " > 1"))
        out.append(rep)
    return out


def brieskorn_embedding_report(b: BrieskornData, basis: HFBasis | None = None) -> ObstructionReport:
    """Chain of checks ruling out a separating embedding in a lens-space filling."""
    s = brieskorn_to_seifert(b)
    basis = basis or hf_basis(seifert_to_graph(s))
    (only,) = list(basis)
    d = only.d
    dim = sum(1 for c in only.classes if c.maslov == d)
    rep = ObstructionReport(str(b), only.spinc.representative, True, d, dim, dim == 1)
    _stage(rep, "d(Y)=0 forced", d == 0, "d = 0" if d == 0 else f"d = {d} != 0")
    spin = spin_obstruction(s, only.spinc, basis)
    rep.even_form, rep.d3 = spin.even_form, spin.d3
    if spin.even_form:
        ok = not (d == 0 and spin.d3 is not None and spin.d3 > 0)
        _stage(rep, "spin obstruction", ok, f"even form forces d >= d3 = {spin.d3} > 0")
    else:
        _stage(rep, "spin obstruction", False, "blown-down form not even")
    _stage(rep, "convex criterion", dim == 1, f"dim HF-hat_d = {dim}")
    return rep
