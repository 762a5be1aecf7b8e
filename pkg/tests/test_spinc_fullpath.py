import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from plumbfloer.errors import PreconditionError
from plumbfloer.fullpath import correction_term, hf_basis, hf_hat_dim_at, is_l_space, run_full_path
from plumbfloer.plumbing import BrieskornData, SeifertData, StarGraph, brieskorn_to_seifert, seifert_to_graph
from plumbfloer.spinc import (
    conjugate,
    enumerate_initial_vectors,
    is_characteristic,
    maslov_grading,
    spinc_class_of,
    spinc_classes,
)

from conftest import random_two_leg, unit_rationals

F = Fraction


def lattice_d_oracle(g, s, slack=2):
    """max (K^2 + |G|)/4 over characteristic K of class s in a box around the initial region."""
    form = g.form
    ranges = [range(m - slack, -m + slack + 1, 2) for m in form.framings]
    best = None
    for v in itertools.product(*ranges):
        if spinc_class_of(v, form) == s:
            m = maslov_grading(v, form)
            best = m if best is None else max(best, m)
    return best


@st.composite
def small_graphs(draw):
    e0 = draw(st.sampled_from([-1, -2, -3]))
    n = draw(st.integers(1, 3))
    coeffs = draw(st.lists(unit_rationals(5), min_size=n, max_size=n))
    s = SeifertData(e0, tuple(coeffs))
    while s.e0 + sum(s.coeffs) >= 0:
        s = SeifertData(s.e0 - 1, s.coeffs)
    return seifert_to_graph(s)


def test_single_vertex_minus_one():
    b = hf_basis(StarGraph(-1))
    assert b.n_spinc == 1 and b.n_classes == 1
    assert list(b)[0].d == 0


def test_single_vertex_minus_two():
    b = hf_basis(StarGraph(-2))
    assert sorted(x.d for x in b) == [F(-1, 4), F(1, 4)]


def test_lens_space_l72():
    g = seifert_to_graph(SeifertData.parse("-1; 1/3, 1/5"))
    b = hf_basis(g)
    assert b.n_spinc == 7 and b.n_classes == 7
    assert is_l_space(b)


def test_poincare_sphere():
    g = seifert_to_graph(brieskorn_to_seifert(BrieskornData((2, 3, 5))))
    out = run_full_path((0,) * 8, g.form)
    assert out.ends_correctly and out.n_steps == 0
    b = hf_basis(g)
    assert b.n_classes == 1 and list(b)[0].d == 2


@pytest.mark.parametrize("exps, n_classes", [((2, 3, 7), 2), ((2, 3, 11), 2), ((2, 5, 7), 3), ((3, 4, 5), 3)])
def test_brieskorn_class_counts(exps, n_classes):
    g = seifert_to_graph(brieskorn_to_seifert(BrieskornData(exps)))
    b = hf_basis(g)
    assert b.n_spinc == 1
    assert b.n_classes == n_classes
    assert not is_l_space(b)


def test_drop_out():
    Q = [[-2, 1], [1, -2]]
    out = run_full_path((2, 2), Q)
    assert out.dropped and out.end == (-2, 4) and out.offending == 1
    with pytest.raises(AttributeError):
        out.terminal
    with pytest.raises(PreconditionError):
        run_full_path((1, 2), Q)


def test_non_negative_definite_rejected():
    with pytest.raises(PreconditionError):
        hf_basis(seifert_to_graph(SeifertData.parse("-1; 1/2, 1/2")))
    with pytest.raises(PreconditionError):
        hf_basis([[-2, 1], [1, -2]])


def test_unchecked_general_form():
    b = hf_basis([[-2, 1], [1, -2]], unchecked=True)
    assert b.n_spinc == 3
    assert b.metadata["unchecked"] and b.metadata["even_part_only"]


def test_metadata_and_json():
    b = hf_basis(seifert_to_graph(SeifertData.parse("-2; 1/2, 1/3")))
    doc = b.to_json()
    assert {"spinc", "spin", "classes", "d"} <= set(doc[0])
    assert {"initial", "terminal", "maslov", "n_steps"} <= set(doc[0]["classes"][0])


@settings(max_examples=40)
@given(small_graphs())
def test_lattice_invariants(g):
    form = g.form
    classes = spinc_classes(form)
    assert len(classes) == abs(form.det)
    b = hf_basis(g)
    for s in classes:
        t = conjugate(s, form)
        assert conjugate(t, form) == s
        assert b[s].d == b[t].d
        assert s.is_spin == (s == t)
        for c in b[s].classes:
            assert maslov_grading(c.initial, form) == maslov_grading(tuple(-x for x in c.initial), form)
    for v in enumerate_initial_vectors(form)[:50]:
        assert is_characteristic(v, form)
        assert spinc_class_of(tuple(-x for x in v), form) == conjugate(spinc_class_of(v, form), form)


@settings(max_examples=15)
@given(small_graphs().filter(lambda g: g.n_vertices <= 4))
def test_d_against_lattice_maximum(g):
    b = hf_basis(g)
    for blk in b:
        assert correction_term(b, blk.spinc) == lattice_d_oracle(g, blk.spinc)


def test_hf_hat_dim():
    g = seifert_to_graph(brieskorn_to_seifert(BrieskornData((2, 3, 7))))
    b = hf_basis(g)
    s = list(b)[0].spinc
    assert hf_hat_dim_at(b, s, 0) == 2
    assert hf_hat_dim_at(b, s, 1) == 0


def test_lens_spaces_are_l_spaces(rng):
    for _ in range(10):
        e0, coeffs = random_two_leg(rng)
        g = seifert_to_graph(SeifertData(e0, coeffs))
        b = hf_basis(g)
        assert b.n_classes == abs(g.form.det)
        assert is_l_space(b)
