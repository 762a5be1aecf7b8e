"""The full path algorithm: HF^- generators, correction terms, L-space test."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ConsistencyError, PreconditionError
from .plumbing import IntersectionForm, StarGraph, is_negative_definite
from .spinc import (
    CharVector,
    SpincClass,
    as_form,
    enumerate_initial_vectors,
    is_characteristic,
    maslov_grading,
    spinc_class_of,
    spinc_classes,
)

__all__ = [
    "PathOutcome",
    "FullPathClass",
    "SpincBasis",
    "HFBasis",
    "is_initial",
    "is_terminal",
    "run_full_path",
    "hf_basis",
    "correction_term",
    "hf_hat_dim_at",
    "is_l_space",
]


def is_initial(v: Sequence[int], framings: Sequence[int]) -> bool:
    return all(m + 2 <= x <= -m for x, m in zip(v, framings))


def is_terminal(v: Sequence[int], framings: Sequence[int]) -> bool:
    return all(m <= x <= -m - 2 for x, m in zip(v, framings))


@dataclass(frozen=True)
class PathOutcome:
    """Deterministic trace of the full path started at ``start``.

    ``steps`` lists the vertex used by each step.  If the path dropped out,
    ``end`` is the offending vector and ``offending`` the vertex with
    ``|v_i| > -m(i)``; otherwise ``end`` is terminal.
    """

    start: CharVector
    steps: tuple[int, ...]
    end: CharVector
    offending: int | None = None
    start_is_initial: bool = True

    @property
    def dropped(self) -> bool:
        return self.offending is not None

    @property
    def ends_correctly(self) -> bool:
        return not self.dropped and self.start_is_initial

    @property
    def initial(self) -> CharVector:
        return self.start

    @property
    def terminal(self) -> CharVector:
        if self.dropped:
            raise AttributeError("path dropped out; it has no terminal vector")
        return self.end

    @property
    def n_steps(self) -> int:
        return len(self.steps)

    def vectors(self, Q) -> list[CharVector]:
        """Replay the trace; the list starts with ``start`` and ends with ``end``."""
        form = as_form(Q)
        v = list(self.start)
        out = [tuple(v)]
        for j in self.steps:
            for i, q in enumerate(form.Q[j]):
                if q:
                    v[i] += 2 * q
            out.append(tuple(v))
        return out


def _neighbours(form: IntersectionForm):
    return [[(i, 2 * q) for i, q in enumerate(row) if q] for row in form.Q]


def _trace(start, form, nbrs, framings, record=None) -> PathOutcome:
    v = list(start)
    bound = [-m for m in framings]
    seen = {tuple(v)}
    if record is not None:
        record.append(tuple(v))
    steps = []
    n = len(v)
    while True:
        j = -1
        for i in range(n):
            x = v[i]
            if x > bound[i] or -x > bound[i]:
                return PathOutcome(tuple(start), tuple(steps), tuple(v), i, is_initial(start, framings))
            if j < 0 and x == bound[i]:
                j = i
        if j < 0:
            return PathOutcome(tuple(start), tuple(steps), tuple(v), None, is_initial(start, framings))
        for i, dq in nbrs[j]:
            v[i] += dq
        steps.append(j)
        t = tuple(v)
        if t in seen:
            raise ConsistencyError("full path revisited a vector", vector=t, start=tuple(start))
        seen.add(t)
        if record is not None:
            record.append(t)


def run_full_path(v: Sequence[int], Q) -> PathOutcome:
    """Follow steps at the smallest eligible vertex until termination or drop-out."""
    form = as_form(Q)
    if not is_characteristic(v, form):
        raise PreconditionError(f"{tuple(v)} is not characteristic")
    return _trace(tuple(v), form, _neighbours(form), form.framings)


@dataclass(frozen=True)
class FullPathClass:
    spinc: SpincClass
    outcome: PathOutcome
    maslov: Fraction

    @property
    def initial(self) -> CharVector:
        return self.outcome.initial

    @property
    def terminal(self) -> CharVector:
        return self.outcome.terminal


@dataclass
class SpincBasis:
    spinc: SpincClass
    classes: list[FullPathClass]
    dropped: int = 0

    @property
    def d(self) -> Fraction:
        if not self.classes:
            raise ConsistencyError("Spin^c class has no correctly-ending full path", spinc=self.spinc.representative)
        return max(c.maslov for c in self.classes)


@dataclass
class HFBasis:
    form: IntersectionForm
    per_spinc: dict[SpincClass, SpincBasis]
    graph: StarGraph | None = None
    metadata: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(sorted(self.per_spinc.values(), key=lambda b: b.spinc.representative))

    def __getitem__(self, s: SpincClass) -> SpincBasis:
        return self.per_spinc[s]

    @property
    def n_spinc(self) -> int:
        return len(self.per_spinc)

    @property
    def n_classes(self) -> int:
        return sum(len(b.classes) for b in self.per_spinc.values())

    def all_classes(self) -> list[FullPathClass]:
        return [c for b in self for c in b.classes]

    def class_of_initial(self, v: Sequence[int]) -> FullPathClass | None:
        v = tuple(v)
        for c in self.all_classes():
            if c.initial == v:
                return c
        return None

    def to_json(self) -> list[dict]:
        from .jsonio import frac

        return [
            {
                "spinc": list(b.spinc.representative),
                "spin": b.spinc.is_spin,
                "classes": [
                    {
                        "initial": list(c.initial),
                        "terminal": list(c.terminal),
                        "maslov": frac(c.maslov),
                        "n_steps": c.outcome.n_steps,
                    }
                    for c in b.classes
                ],
                "d": frac(b.d),
            }
            for b in self
        ]


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def hf_basis(g, verify: bool = True, unchecked: bool = False) -> HFBasis:
    """Run the full path from every initial vector and group the classes.

    ``g`` is a :class:`StarGraph`; a bare form is accepted only with
    ``unchecked=True`` (the caller vouches for almost-rationality).
    With ``verify`` the Maslov grading is recomputed on every vector.
    """
    if isinstance(g, StarGraph):
        if not is_negative_definite(g):
            raise PreconditionError(f"graph {g.to_text()} is not negative-definite")
        form, graph = g.form, g
    elif unchecked:
        form, graph = as_form(g), None
        if not form.negative_definite():
            raise PreconditionError("form is not negative-definite")
    else:
        raise PreconditionError("only star-shaped graphs are checked; pass unchecked=True for other forms")

    nbrs = _neighbours(form)
    framings = form.framings
    starts = enumerate_initial_vectors(form)
    outcomes: list[PathOutcome] = []
    owner: dict[CharVector, int] = {}
    uf = _UnionFind(len(starts))
    for idx, v in enumerate(starts):
        trail: list[CharVector] = []
        out = _trace(v, form, nbrs, framings, trail)
        outcomes.append(out)
        for w in trail:
            other = owner.setdefault(w, idx)
            if other != idx:
                uf.union(other, idx)
        if verify and not out.dropped:
            m0 = maslov_grading(v, form)
            for w in trail[1:]:
                if maslov_grading(w, form) != m0:
                    raise ConsistencyError("Maslov grading changed along a step", start=v, vector=w)

    groups: dict[int, list[int]] = {}
    for idx in range(len(starts)):
        groups.setdefault(uf.find(idx), []).append(idx)

    per_spinc = {s: SpincBasis(s, []) for s in spinc_classes(form)}
    for members in groups.values():
        outs = [outcomes[i] for i in members]
        s = spinc_class_of(outs[0].start, form)
        if any(o.dropped for o in outs):
            per_spinc[s].dropped += 1
            continue
        if len(outs) != 1 or len({o.end for o in outs}) != 1:
            raise ConsistencyError(
                "correctly-ending class has more than one initial vector",
                initials=[o.start for o in outs],
            )
        o = outs[0]
        per_spinc[s].classes.append(FullPathClass(s, o, maslov_grading(o.start, form)))

    for b in per_spinc.values():
        b.classes.sort(key=lambda c: c.initial)
        if not b.classes:
            raise ConsistencyError("Spin^c class without a correctly-ending full path", spinc=b.spinc.representative)
    meta = {"even_part_only": True, "unchecked": bool(unchecked and graph is None)}
    return HFBasis(form, per_spinc, graph, meta)


def _basis(g) -> HFBasis:
    return g if isinstance(g, HFBasis) else hf_basis(g)


def correction_term(g, s: SpincClass) -> Fraction:
    return _basis(g)[s].d


def hf_hat_dim_at(g, s: SpincClass, grading) -> int:
    """Correctly-ending classes of ``s`` in the given grading (even part of HF-hat)."""
    grading = Fraction(grading)
    return sum(1 for c in _basis(g)[s].classes if c.maslov == grading)


def is_l_space(g) -> bool:
    return all(len(b.classes) == 1 for b in _basis(g))
