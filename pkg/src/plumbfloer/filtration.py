"""Alexander filtration of a meridian leaf, heights, tau invariants, TB bounds."""
from __future__ import annotations

import math
import weakref
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ConsistencyError, PreconditionError
from .fullpath import FullPathClass, HFBasis, PathOutcome, hf_basis, is_initial, run_full_path
from .plumbing import IntersectionForm, StarGraph
from .spinc import SpincClass, as_form

__all__ = [
    "LeafSpec",
    "Height",
    "TBBound",
    "leaf_row",
    "canonical_vector",
    "alexander_filtration",
    "filtration_interval",
    "height_of_class",
    "tau_of_class",
    "tau_min",
    "max_tb",
]


@dataclass(frozen=True)
class LeafSpec:
    """Vertex the meridian leaf hangs from (0-based; 0 is the centre)."""

    vertex: int = 0

    @property
    def checked(self) -> bool:
        # class separation is only guaranteed for the central placement
        return self.vertex == 0


def _leaf(leaf) -> LeafSpec:
    if leaf is None:
        return LeafSpec()
    return leaf if isinstance(leaf, LeafSpec) else LeafSpec(int(leaf))


_ROWS: "weakref.WeakKeyDictionary[IntersectionForm, dict]" = weakref.WeakKeyDictionary()


def leaf_row(Q, leaf=None) -> tuple[Fraction, ...]:
    """Row ``e_leaf^T Q^{-1}``."""
    form = as_form(Q)
    k = _leaf(leaf).vertex
    if not 0 <= k < form.n:
        raise PreconditionError(f"leaf vertex {k} does not exist")
    cache = _ROWS.setdefault(form, {})
    if k not in cache:
        cache[k] = form.solve([int(i == k) for i in range(form.n)])
    return cache[k]


_SCALED: "weakref.WeakKeyDictionary[IntersectionForm, dict]" = weakref.WeakKeyDictionary()


def _scaled_row(form: IntersectionForm, k: int) -> tuple[tuple[int, ...], int]:
    """Leaf row as integers over a common denominator."""
    cache = _SCALED.setdefault(form, {})
    if k not in cache:
        row = leaf_row(form, k)
        den = math.lcm(*(x.denominator for x in row))
        cache[k] = (tuple(int(x * den) for x in row), den)
    return cache[k]


def _row_dot(form, k, v) -> Fraction:
    ints, den = _scaled_row(form, k)
    return Fraction(sum(a * x for a, x in zip(ints, v)), den)


def canonical_vector(Q) -> tuple[int, ...]:
    """``V_can`` with ``v_i = m(i) + 2``."""
    return tuple(m + 2 for m in as_form(Q).framings)


def alexander_filtration(v: Sequence[int], Q, leaf=None) -> Fraction:
    """``(-e^T Q^{-1} e + e^T Q^{-1} V) / 2`` for the leaf vertex ``e``."""
    form = as_form(Q)
    k = _leaf(leaf).vertex
    leaf_row(form, k)
    ints, den = _scaled_row(form, k)
    return Fraction(-ints[k] + sum(a * x for a, x in zip(ints, v)), 2 * den)


def _outcome(c) -> PathOutcome:
    out = c.outcome if isinstance(c, FullPathClass) else c
    if not out.ends_correctly:
        raise PreconditionError("class does not end correctly")
    return out


def filtration_interval(c, Q, leaf=None) -> tuple[Fraction, Fraction]:
    """Minimum and maximum of the filtration over the class (initial, terminal)."""
    out = _outcome(c)
    return alexander_filtration(out.initial, Q, leaf), alexander_filtration(out.terminal, Q, leaf)


@dataclass(frozen=True)
class Height:
    value: int
    leaf_steps: int
    spread: Fraction
    closed_form: Fraction
    conjugate_initial: tuple[int, ...]


def height_of_class(c, Q, leaf=None, basis: HFBasis | None = None) -> Height:
    """Height of a correctly-ending class, computed three ways.

    The count of steps at the leaf vertex, ``F(-V') - F(V)`` and
    ``-e.(V + V')/2`` must coincide; ``V'`` is the initial vector of the
    conjugate class, located via ``basis`` when given, else by tracing.
    """
    form = as_form(Q)
    site = _leaf(leaf)
    out = _outcome(c)
    v = out.initial
    conj_start = tuple(-x for x in out.terminal)
    if basis is not None:
        conj = basis.class_of_initial(conj_start)
        if conj is None:
            raise ConsistencyError("negated terminal vector is not an initial vector of the basis", vector=conj_start)
        conj_out = conj.outcome
    else:
        conj_out = run_full_path(conj_start, form)
    if not conj_out.ends_correctly or conj_out.end != tuple(-x for x in v):
        raise ConsistencyError("conjugate full path is not the negated path", start=v)
    vp = conj_out.initial
    leaf_steps = sum(1 for j in out.steps if j == site.vertex)
    spread = alexander_filtration(tuple(-x for x in vp), form, site) - alexander_filtration(v, form, site)
    closed = -_row_dot(form, site.vertex, [a + b for a, b in zip(v, vp)]) / 2
    if not (leaf_steps == spread == closed):
        raise ConsistencyError(
            "height computations disagree",
            leaf_steps=leaf_steps,
            spread=str(spread),
            closed_form=str(closed),
        )
    return Height(leaf_steps, leaf_steps, spread, closed, vp)


def _fibre_term(Q, site: LeafSpec, graph: StarGraph | None) -> Fraction:
    # 1/(-e(M)) for the regular fibre; equals -[D].[D] = -Q^{-1}_{leaf,leaf}
    if graph is not None and site.vertex == 0:
        return 1 / -graph.euler()
    return -leaf_row(Q, site)[site.vertex]


def tau_of_class(c, Q, leaf=None) -> Fraction:
    """``(1/(-e(M)) + e.V) / 2`` with ``V`` the initial vector of the class."""
    site = _leaf(leaf)
    graph = Q if isinstance(Q, StarGraph) else None
    out = _outcome(c)
    form = as_form(Q)
    leaf_row(form, site)
    return (_fibre_term(Q, site, graph) + _row_dot(form, site.vertex, out.initial)) / 2


def tau_min(g, s: SpincClass, leaf=None, basis: HFBasis | None = None) -> Fraction:
    """Minimal tau over correctly-ending classes of ``s`` in grading ``d``."""
    basis = basis or hf_basis(g)
    b = basis[s]
    d = b.d
    return min(tau_of_class(c, g, leaf) for c in b.classes if c.maslov == d)


@dataclass(frozen=True)
class TBBound:
    tb: Fraction
    sl: Fraction
    tau: Fraction
    tau_conjugate: Fraction
    height: int


def max_tb(g, leaf=None) -> TBBound:
    """``tau + tau_bar - 1`` and ``2 max(tau, tau_bar) - 1`` on the canonical class."""
    site = _leaf(leaf)
    form = as_form(g)
    vcan = canonical_vector(form)
    if not is_initial(vcan, form.framings):
        raise PreconditionError("canonical vector is not initial")
    out = run_full_path(vcan, form)
    if not out.ends_correctly:
        raise ConsistencyError("full path of the canonical vector drops out", vector=vcan)
    h = height_of_class(out, form, site)
    conj = run_full_path(h.conjugate_initial, form)
    tau = tau_of_class(out, g, site)
    tau_bar = tau_of_class(conj, g, site)
    return TBBound(tau + tau_bar - 1, 2 * max(tau, tau_bar) - 1, tau, tau_bar, h.value)
