"""Exhaustive parameter grids and the agreement suites run over them."""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import PlumbError
from .plumbing import SeifertData

SUITES = ("twist", "present", "conjugation")


def rationals(max_den: int) -> list[Fraction]:
    """Reduced fractions in (0, 1) with denominator <= max_den, descending."""
    return sorted({Fraction(p, q) for q in range(2, max_den + 1) for p in range(1, q)}, reverse=True)


def seifert_grid(e0s: Sequence[int], ns: Sequence[int], max_den: int) -> Iterator[SeifertData]:
    """Every negative-definite ``M(e0; r1 >= ... >= rn)`` on the grid, in a fixed order."""
    rs = rationals(max_den)
    for e0 in e0s:
        for n in ns:
            for coeffs in itertools.combinations_with_replacement(rs, n):
                if e0 + sum(coeffs) < 0:
                    yield SeifertData(e0, coeffs)


@dataclass(frozen=True)
class CaseResult:
    seifert: str
    suite: str
    ok: bool
    values: tuple
    error: str = ""


def _run_twist(s: SeifertData) -> tuple[bool, tuple]:
    from .contact import twisting_number_farey, twisting_number_height

    a = twisting_number_height(s).q
    b = twisting_number_farey(s).q
    ok = a == b and (s.e0 == -1 or a == 1)
    return ok, (a, b)


def _run_present(s: SeifertData) -> tuple[bool, tuple]:
    from .contact import blown_down_presentation

    p = blown_down_presentation(s)
    return bool(p.matches_blowdown), (p.case, p.size, p.q)


def _run_conjugation(s: SeifertData) -> tuple[bool, tuple]:
    from .fullpath import hf_basis
    from .plumbing import seifert_to_graph
    from .spinc import conjugate

    g = seifert_to_graph(s)
    basis = hf_basis(g)
    ok = basis.n_spinc == abs(g.form.det)
    ok = ok and all(b.d == basis[conjugate(b.spinc, g.form)].d for b in basis)
    return ok, (basis.n_spinc, basis.n_classes)


_RUNNERS = {"twist": _run_twist, "present": _run_present, "conjugation": _run_conjugation}


def run_case(args: tuple[str, int, tuple[Fraction, ...]]) -> CaseResult:
    suite, e0, coeffs = args
    s = SeifertData(e0, coeffs)
    if suite == "present" and s.e0 == -1 and s.n < 2:
        return CaseResult(str(s), suite, True, ())
    try:
        ok, values = _RUNNERS[suite](s)
        return CaseResult(str(s), suite, ok, values)
    except PlumbError as exc:
        return CaseResult(str(s), suite, False, (), f"{type(exc).__name__}: {exc}")


def run_sweep(
    cases: Iterable[SeifertData], suite: str = "twist", workers: int = 1, chunksize: int = 256
) -> list[CaseResult]:
    """Run one suite over the cases; results come back in input order."""
    if suite not in _RUNNERS:
        raise ValueError(f"unknown suite {suite!r}")
    jobs = [(suite, s.e0, s.coeffs) for s in cases]
    if workers <= 1:
        return [run_case(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_case, jobs, chunksize=chunksize))

