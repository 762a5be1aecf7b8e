from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from plumbfloer.errors import PreconditionError
from plumbfloer.filtration import (
    LeafSpec,
    alexander_filtration,
    canonical_vector,
    filtration_interval,
    height_of_class,
    max_tb,
    tau_min,
    tau_of_class,
)
from plumbfloer.fullpath import hf_basis, run_full_path
from plumbfloer.plumbing import BrieskornData, SeifertData, StarGraph, brieskorn_to_seifert, seifert_to_graph
from plumbfloer.spinc import conjugate

from conftest import unit_rationals

F = Fraction
TREFOIL = seifert_to_graph(SeifertData.parse("-1; 1/2, 1/3"))
L72 = seifert_to_graph(SeifertData.parse("-1; 1/3, 1/5"))


def test_filtration_examples():
    u = StarGraph(-1)
    assert alexander_filtration((1,), u) == 0
    assert alexander_filtration((-1,), u) == 1
    assert alexander_filtration((1, 0, -1), TREFOIL) == 1


def test_trefoil_height_and_tau():
    b = hf_basis(TREFOIL)
    (c,) = b.all_classes()
    h = height_of_class(c, TREFOIL.form, basis=b)
    assert h.value == 4 == h.spread == h.closed_form
    assert filtration_interval(c, TREFOIL.form) == (1, 5)
    assert tau_of_class(c, TREFOIL) == 1
    assert tau_min(TREFOIL, c.spinc, basis=b) == 1


def test_heights_of_canonical_classes():
    out = run_full_path(canonical_vector(L72.form), L72.form)
    assert height_of_class(out, L72.form).value == 1
    e8 = seifert_to_graph(brieskorn_to_seifert(BrieskornData((2, 3, 5))))
    out = run_full_path(canonical_vector(e8.form), e8.form)
    assert height_of_class(out, e8.form).value == 0


@pytest.mark.parametrize(
    "graph, tb, height",
    [
        (TREFOIL, F(1), 4),
        (seifert_to_graph(SeifertData.parse("-1; 1/2, 2/5")), F(3), 6),
        (StarGraph(-1), F(-1), 1),
        (L72, F(1, 7), 1),
    ],
)
def test_max_tb(graph, tb, height):
    res = max_tb(graph)
    assert res.tb == tb
    assert res.height == height
    assert res.sl == 2 * max(res.tau, res.tau_conjugate) - 1


def test_unknot_tau():
    u = StarGraph(-1)
    (c,) = hf_basis(u).all_classes()
    assert tau_of_class(c, u) == 0


@pytest.mark.parametrize("a1, a2", [(2, 3), (2, 5), (3, 4), (3, 5), (4, 7), (5, 9)])
def test_torus_knot_tb(a1, a2):
    s = brieskorn_to_seifert(BrieskornData((a1, a2)))
    assert max_tb(seifert_to_graph(s)).tb == a1 * a2 - a1 - a2


def test_leaf_bounds():
    with pytest.raises(PreconditionError):
        alexander_filtration((1, 0, -1), TREFOIL, leaf=7)
    assert LeafSpec().checked and not LeafSpec(2).checked


@st.composite
def graphs(draw):
    e0 = draw(st.sampled_from([-1, -2]))
    coeffs = draw(st.lists(unit_rationals(5), min_size=2, max_size=3))
    s = SeifertData(e0, tuple(coeffs))
    while s.e0 + sum(s.coeffs) >= 0:
        s = SeifertData(s.e0 - 1, s.coeffs)
    return seifert_to_graph(s)


@settings(max_examples=25)
@given(graphs())
def test_monotone_and_consistent(g):
    form = g.form
    b = hf_basis(g)
    vcan_out = run_full_path(canonical_vector(form), form)
    h_can = height_of_class(vcan_out, form, basis=b).value
    for c in b.all_classes():
        vecs = c.outcome.vectors(form)
        for step, (v, w) in zip(c.outcome.steps, zip(vecs, vecs[1:])):
            inc = alexander_filtration(w, form) - alexander_filtration(v, form)
            assert inc == (1 if step == 0 else 0)
        h = height_of_class(c, form, basis=b)
        assert h.value == h.spread == h.closed_form
        assert h_can <= h.value
    for blk in b:
        # distinct initial filtrations inside one Spin^c class
        fs = [alexander_filtration(c.initial, form) for c in blk.classes]
        assert len(set(fs)) == len(fs)
        conj = conjugate(blk.spinc, form)
        if blk.spinc.is_spin:
            assert conj == blk.spinc
            assert tau_min(g, conj, basis=b) == tau_min(g, blk.spinc, basis=b)


@pytest.mark.parametrize("exps", [(2, 3, 7), (2, 3, 11), (2, 5, 7), (3, 4, 5)])
def test_intervals_ordered_and_realised(exps):
    g = seifert_to_graph(brieskorn_to_seifert(BrieskornData(exps)))
    form = g.form
    b = hf_basis(g)
    ivs = sorted(filtration_interval(c, form) for c in b.all_classes())
    for (a1, b1), (a2, b2) in zip(ivs, ivs[1:]):
        assert a1 <= b1 < a2 <= b2
    for c in b.all_classes():
        lo, hi = filtration_interval(c, form)
        seen = {alexander_filtration(v, form) for v in c.outcome.vectors(form)}
        assert seen == set(range(int(lo), int(hi) + 1))
