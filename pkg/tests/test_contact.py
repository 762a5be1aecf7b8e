import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from plumbfloer import linalg
from plumbfloer.contact import (
    blow_down,
    blown_down_presentation,
    brieskorn_embedding_report,
    count_tight,
    ell_pair,
    embedding_obstruction,
    farey_search_bound,
    fillable_bound,
    sharp,
    spin_obstruction,
    twisting_conditions,
    twisting_number_farey,
    twisting_number_height,
)
from plumbfloer.errors import PreconditionError
from plumbfloer.exact import farey_mediant_search
from plumbfloer.filtration import max_tb
from plumbfloer.plumbing import BrieskornData, SeifertData, StarGraph, brieskorn_to_seifert, euler_number, seifert_to_graph

from conftest import two_leg_lens, unit_rationals

F = Fraction
S = SeifertData.parse


@pytest.mark.parametrize(
    "r1, r2, pair, num",
    [
        (F(1, 2), F(1, 3), (1, 1), 4),
        (F(1, 3), F(1, 5), (0, 0), 1),
        (F(2, 3), F(1, 4), (2, 1), 6),
    ],
)
def test_ell_pair_and_sharp(r1, r2, pair, num):
    assert tuple(ell_pair(r1, r2)) == pair
    assert sharp(r1, r2) == num


def test_ell_pair_preconditions():
    with pytest.raises(PreconditionError):
        ell_pair(F(1, 2), F(1, 2))
    with pytest.raises(PreconditionError):
        ell_pair(F(1, 3), F(1, 2))


@pytest.mark.parametrize(
    "text, tw",
    [("-2; 1/2, 2/3, 4/5", -1), ("-1; 1/2, 1/3", -5), ("-1; 1/2, 1/3, 1/7", -5), ("-1; 1/3, 1/5", -2)],
)
def test_twisting_examples(text, tw):
    s = S(text)
    assert twisting_number_height(s).tw == tw
    assert twisting_number_farey(s).tw == tw


def test_farey_witnesses():
    assert twisting_number_farey(S("-1; 1/2, 1/3")).witnesses["p"] == (3, 2)
    assert twisting_number_farey(S("-1; 1/3, 1/5")).witnesses["p"] == (1, 1)
    assert twisting_number_farey(S("-4; 1/2, 1/3, 1/5")).witnesses["p"] == (1, 1, 3)


def test_twisting_preconditions():
    with pytest.raises(PreconditionError):
        twisting_number_height(S("-1; 1/2, 1/2"))
    with pytest.raises(PreconditionError):
        twisting_number_farey(S("-2; 1/2"))


@pytest.mark.parametrize("text, count", [("-2; 1/3, 1/3", 4), ("-3; 1/2", 2), ("-2; 1/2, 1/2, 1/2", 1), ("-3; 2/5, 1/4", 2 * 2 * 1 * 3)])
def test_count_tight(text, count):
    assert count_tight(S(text)) == count


def test_count_tight_rejects_e0_minus_one():
    with pytest.raises(PreconditionError):
        count_tight(S("-1; 1/3, 1/5"))
    assert fillable_bound(S("-1; 1/3, 1/5")) == 7


def all_p_choices(s, q):
    ranges = [range(math.floor(q * r) + 1, q * 2 + 2) for r in s.coeffs]
    return itertools.product(*ranges)


@st.composite
def seiferts(draw, max_den=8):
    e0 = draw(st.sampled_from([-1, -1, -2, -3]))
    coeffs = draw(st.lists(unit_rationals(max_den), min_size=2, max_size=4))
    s = SeifertData(e0, tuple(coeffs))
    if e0 == -1 and s.coeffs[0] + s.coeffs[1] >= 1:
        s = SeifertData(-2, s.coeffs)
    while s.e0 + sum(s.coeffs) >= 0:
        s = SeifertData(s.e0 - 1, s.coeffs)
    return s


@settings(max_examples=150)
@given(seiferts())
def test_methods_agree_and_q_is_minimal(s):
    h = twisting_number_height(s)
    f = twisting_number_farey(s)
    assert h.q == f.q
    if s.e0 < -1:
        assert h.q == 1
    assert f.q <= farey_search_bound(s)
    if s.e0 == -1:
        gap = 1 - s.coeffs[0] - s.coeffs[1]
        assert f.q <= math.ceil(1 / gap)
    # no smaller q admits any p at all, not just the forced choice
    for q in range(1, f.q):
        assert not any(twisting_conditions(s, q, ps)[0] for ps in all_p_choices(s, q))
    # TB consistency: tw = TB - 1/(-e)
    assert max_tb(seifert_to_graph(s)).tb == h.tw + 1 / -euler_number(s)


@settings(max_examples=60)
@given(two_leg_lens(12))
def test_farey_descent_matches(pair):
    r1, r2 = pair
    q = twisting_number_farey(SeifertData(-1, pair)).q
    if r1 >= F(1, 2):
        assert farey_mediant_search(r1, r2)[1] == q
    else:
        assert q == 2


def test_real_valued_bound_can_fail():
    # q exceeds (1 - r1 - r2)^-1 but not its ceiling
    s = S("-1; 1/12, 1/12")
    assert twisting_number_farey(s).q == 2 > 1 / (1 - F(1, 6))


@pytest.mark.parametrize("a1, a2", [(a, b) for a in range(2, 10) for b in range(a + 1, 10) if math.gcd(a, b) == 1])
def test_torus_knots(a1, a2):
    s = brieskorn_to_seifert(BrieskornData((a1, a2)))
    assert twisting_number_height(s).q == a1 + a2


def test_presentation_e8():
    p = blown_down_presentation(S("-2; 1/2, 2/3, 4/5"))
    assert p.case == "standard"
    assert p.linking == seifert_to_graph(S("-2; 1/2, 2/3, 4/5")).form.Q
    assert p.gamma_prime == 0 and p.even


def test_presentation_sigma_237():
    p = blown_down_presentation(S("-1; 1/2, 1/3, 1/7"))
    assert p.case == "cable_T33"
    assert (p.q, p.d1, p.d2) == (5, 2, 3)
    (c,) = p.components
    assert c.coefficients == (-3,)
    assert c.knot == (2, 3)
    assert p.linking == ((-1,),)
    assert p.matches_blowdown and not p.even


def test_presentation_lens():
    p = blown_down_presentation(S("-1; 1/3, 1/5"))
    assert p.case == "cable_T22"
    assert p.d1 == 1 and p.d2 == 1
    assert abs(linalg.det(p.linking)) == 7


def test_s3_presentation_is_empty():
    p = blown_down_presentation(S("-1; 1/2, 1/3"))
    assert p.size == 0
    with pytest.raises(PreconditionError):
        spin_obstruction(S("-1; 1/2, 1/3"))


def test_blow_down_chain():
    # -1 between -2 and -3: blowing down gives -1 and -2 linked once
    bd = blow_down([[-2, 1, 0], [1, -1, 1], [0, 1, -3]], [1])
    assert bd.matrix == ((-1, 1), (1, -2))
    assert len(bd.exceptional) == 1


@settings(max_examples=80)
@given(seiferts(10))
def test_presentation_validation(s):
    p = blown_down_presentation(s)
    Q = seifert_to_graph(s).form.Q
    assert p.size == p.gamma - p.gamma_prime
    if p.size:
        assert abs(linalg.det(p.linking)) == abs(linalg.det(Q))
        assert linalg.rank(p.linking) == p.size
    assert p.matches_blowdown


def test_spin_obstruction_examples():
    e8 = spin_obstruction(S("-2; 1/2, 2/3, 4/5"))
    assert e8.even_form and e8.d3 == 2 and e8.d == 2
    s237 = spin_obstruction(S("-1; 1/2, 1/3, 1/7"))
    assert not s237.even_form and s237.d3 is None
    rp3 = spin_obstruction(StarGraph(-2))
    assert rp3.even_form and rp3.d3 == F(1, 4)


@pytest.mark.parametrize(
    "exps, stage",
    [((2, 3, 5), "d(Y)=0 forced"), ((2, 3, 7), "spin obstruction"), ((3, 4, 5), "spin obstruction"), ((2, 5, 7), "spin obstruction")],
)
def test_brieskorn_reports(exps, stage):
    rep = brieskorn_embedding_report(BrieskornData(exps))
    assert rep.obstructed and rep.failed_stage == stage


def test_lens_space_convex_criterion_passes():
    for text in ("-1; 1/3, 1/5", "-2; 1/2, 1/3", "-3; 2/5"):
        assert all(r.convex_criterion for r in embedding_obstruction(S(text)))
