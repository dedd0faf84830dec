"""Chain complexes, total complexes, shifts, and the homology engines."""

import pytest

from conftest import two_term
from dflab import groebner as gb
from dflab import linear as ln
from dflab.complexes import (
    ChainComplex,
    NonHomogeneousComplex,
    engines_agree,
    homology_graded,
    homology_groebner,
    shift,
    total_complex,
    truncate,
)
from dflab.ring import ring_descriptor

R = ring_descriptor()
X, Y = R.var("x"), R.var("y")


def test_total_complex_ranks_and_d_squared(resolution):
    assert resolution.ranks() == {0: 1, 1: 2, 2: 1}
    # d^2 = 0 is checked at construction; tamper and expect rejection
    bad_d2 = ln.MapMatrix(
        resolution.module(2), resolution.module(1), {0: {0: X, 1: X}}
    )
    with pytest.raises(ValueError):
        ChainComplex(
            R,
            dict(resolution.modules),
            {1: resolution.diff(1), 2: bad_d2},
        )


def test_total_with_point(resolution, ring97):
    pt = ChainComplex(ring97, {0: ln.LabeledFreeModule(ring97, [ln.atom("pt", 0)])}, {})
    T = total_complex(resolution, pt)
    assert T.ranks() == resolution.ranks()


def test_resolution_homology(resolution):
    rep = homology_graded(resolution, 8)
    assert rep.degrees[0].dims == {0: 1}
    assert rep.degrees[0].ri_rank == 1
    assert rep.degrees[0].annihilator_ok == {"x": True, "y": True}
    assert rep.degrees[1].total == 0 and rep.degrees[2].total == 0
    assert rep.euler_ok


def test_shift(resolution):
    S = shift(resolution, -2)
    assert S.ranks() == {2: 1, 3: 2, 4: 1}
    rep = homology_graded(S, 4)
    assert rep.degrees[2].dims == {0: 1}
    S2 = shift(shift(resolution, 2), -2)
    assert S2.ranks() == resolution.ranks()
    for n in resolution.diffs:
        assert S2.diff(n).equals(resolution.diff(n))


def test_cokernel_of_x(ring97):
    C = two_term(ring97, "m", X, 1)
    rep = homology_graded(C, 6)
    assert rep.degrees[0].dims == {t: 1 for t in range(7)}  # k[y]
    assert not rep.degrees[0].stabilized
    assert rep.degrees[0].annihilator_ok == {"x": True, "y": False}
    assert rep.degrees[1].total == 0


def test_graded_rejects_nonhomogeneous(ring97):
    C = two_term(ring97, "m", X + ring97.one(), 1)
    with pytest.raises(NonHomogeneousComplex):
        homology_graded(C, 4)


def test_groebner_engine_presentation(resolution, ring97):
    M0 = ln.LabeledFreeModule(ring97, [ln.atom("q", 0)])
    M1 = ln.LabeledFreeModule(ring97, [ln.atom("p1", 1), ln.atom("p2", 1)])
    C = ChainComplex(ring97, {0: M0, 1: M1}, {1: ln.MapMatrix(M1, M0, {0: {0: X}, 1: {0: Y}})})
    pres0 = homology_groebner(C, 0)
    assert (pres0.finite, pres0.dim) == (True, 1)
    pres1 = homology_groebner(C, 1)
    assert pres1.generator_count == 1 and not pres1.finite
    # H_1 of the resolution is zero: presentation with quotient dimension 0
    p1 = homology_groebner(resolution, 1)
    assert gb.quotient_dim(p1) == (True, 0)


def test_nonhomogeneous_groebner(ring97):
    # H_0 of (R -> R, x^2 + y) is R/(x^2+y), infinite over the base field
    C = two_term(ring97, "m", X * X + Y, 0)
    pres = homology_groebner(C, 0)
    assert not pres.finite
    # Kos-style: quotient by (x^2+y, y^2) is 4-dimensional
    M0 = ln.LabeledFreeModule(ring97, [ln.atom("q", 0)])
    M1 = ln.LabeledFreeModule(ring97, [ln.atom("p1", 0), ln.atom("p2", 0)])
    C2 = ChainComplex(
        ring97,
        {0: M0, 1: M1},
        {1: ln.MapMatrix(M1, M0, {0: {0: X * X + Y}, 1: {0: Y * Y}})},
    )
    pres2 = homology_groebner(C2, 0)
    assert (pres2.finite, pres2.dim) == (True, 4)


def test_engine_agreement(resolution, ring97):
    assert engines_agree(resolution, 6)
    assert engines_agree(two_term(ring97, "m", X, 1), 6)
    assert engines_agree(total_complex(resolution, resolution), 6)


def test_truncate(resolution):
    T = truncate(resolution, 1)
    assert T.ranks() == {0: 1, 1: 2}
    rep = homology_graded(T, 4)
    assert rep.degrees[0].dims == {0: 1}
