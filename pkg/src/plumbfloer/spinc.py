"""Characteristic vectors, Spin^c classes on the boundary, Maslov grading."""
from __future__ import annotations

import itertools
import weakref
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PreconditionError
from .plumbing import IntersectionForm, StarGraph

CharVector = tuple[int, ...]

__all__ = [
    "CharVector",
    "SpincClass",
    "as_form",
    "is_characteristic",
    "enumerate_initial_vectors",
    "spinc_key",
    "spinc_class_of",
    "spinc_classes",
    "conjugate",
    "is_spin",
    "maslov_grading",
]


def as_form(x) -> IntersectionForm:
    if isinstance(x, IntersectionForm):
        return x
    if isinstance(x, StarGraph):
        return x.form
    return IntersectionForm(x)


def is_characteristic(v: Sequence[int], form: IntersectionForm) -> bool:
    return len(v) == form.n and all((vi - m) % 2 == 0 for vi, m in zip(v, form.framings))


def _check(v, form):
    if not is_characteristic(v, form):
        raise PreconditionError(f"{tuple(v)} is not characteristic for framings {form.framings}")


def enumerate_initial_vectors(Q) -> list[CharVector]:
    """All ``V`` with ``m(i) + 2 <= v_i <= -m(i)``, in lexicographic order."""
    form = as_form(Q)
    ranges = [range(m + 2, -m + 1, 2) for m in form.framings]
    return [tuple(v) for v in itertools.product(*ranges)]


def spinc_key(v: Sequence[int], Q) -> tuple[Fraction, ...]:
    """Fractional parts of ``Q^{-1} V / 2``; equal keys <=> same boundary Spin^c."""
    form = as_form(Q)
    return tuple((x / 2) % 1 for x in form.solve(v))


@dataclass(frozen=True)
class SpincClass:
    """A Spin^c structure on the boundary, named by its canonical vector."""

    representative: CharVector
    key: tuple[Fraction, ...]

    def __eq__(self, other):
        return isinstance(other, SpincClass) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @property
    def conjugate_key(self) -> tuple[Fraction, ...]:
        return tuple((-x) % 1 for x in self.key)

    @property
    def is_spin(self) -> bool:
        return self.key == self.conjugate_key


class _Lattice:
    def __init__(self, form: IntersectionForm):
        self.form = form
        self.by_key: dict[tuple, SpincClass] = {}
        for v in enumerate_initial_vectors(form):
            k = spinc_key(v, form)
            if k not in self.by_key:
                self.by_key[k] = SpincClass(v, k)


_LATTICES: "weakref.WeakKeyDictionary[IntersectionForm, _Lattice]" = weakref.WeakKeyDictionary()


def _lattice(form: IntersectionForm) -> _Lattice:
    lat = _LATTICES.get(form)
    if lat is None:
        lat = _LATTICES[form] = _Lattice(form)
    return lat


def spinc_classes(Q) -> list[SpincClass]:
    """Every boundary Spin^c class, sorted by canonical representative."""
    return sorted(_lattice(as_form(Q)).by_key.values(), key=lambda s: s.representative)


def spinc_class_of(v: Sequence[int], Q) -> SpincClass:
    form = as_form(Q)
    _check(v, form)
    k = spinc_key(v, form)
    try:
        return _lattice(form).by_key[k]
    except KeyError:
        raise PreconditionError("no initial vector represents this class; is Q negative-definite?") from None


def conjugate(s: SpincClass, Q) -> SpincClass:
    return _lattice(as_form(Q)).by_key[s.conjugate_key]


def is_spin(s: SpincClass) -> bool:
    return s.is_spin


def maslov_grading(v: Sequence[int], Q) -> Fraction:
    """``(V^T Q^{-1} V + |Gamma|) / 4``."""
    form = as_form(Q)
    _check(v, form)
    return (form.pairing(v, v) + form.n) / 4
