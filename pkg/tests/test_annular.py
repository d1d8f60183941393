import math

import pytest

from looptl.annular import (RPolynomial, annular_closure, annular_ideal,
                            beta_report, eigenvalue_family, generator_roots)
from looptl.scalars import SpecialField
from looptl.tlcat import Morphism, jones_wenzl


def test_rpolynomial_arithmetic():
    field = SpecialField(3)
    r = RPolynomial([field.zero, field.one])  # R
    sq = r * r
    assert sq.coeffs[2] == field.one
    assert (r + r).coeffs[1] == field.element([2])


@pytest.mark.parametrize("ell", [1, 2, 3])
def test_closure_of_p2_is_r_squared_minus_one(ell):
    field = SpecialField(ell)
    p2 = jones_wenzl(2, backend="special", ell=ell)
    closed = annular_closure(p2)
    expect = [field.element([-1]), field.zero, field.one]
    got = list(closed.coeffs) + [field.zero] * (3 - len(closed.coeffs))
    assert got[:3] == expect


def test_closure_of_identity_strand():
    field = SpecialField(2)
    one_strand = Morphism.identity(1, field.delta)
    closed = annular_closure(one_strand)
    # one through-strand closes to the annular variable R itself
    assert list(closed.coeffs) == [field.zero, field.one]


@pytest.mark.parametrize("ell", [1, 2, 3, 4])
def test_ideal_generator_roots_in_family(ell):
    ideal = annular_ideal(ell, ell + 2)
    roots = generator_roots(ideal)
    fam = eigenvalue_family(ell)
    # every eigenvalue in the family is a root of the ideal generator
    for x in fam:
        assert min(abs(x - r) for r in roots) < 1e-9
    # and the family consists of values +-2 cos(k pi/(ell+2))
    for x in fam:
        best = min(abs(abs(x) - abs(2 * math.cos(math.pi * k / (ell + 2))))
                   for k in range(1, ell + 2))
        assert best < 1e-9


def test_beta_suite_level3_even_shifted():
    rep = beta_report(3)
    res = rep["results"][("shifted", "even")]
    assert res["orthogonal"] and res["idempotent"]
    assert res["nonzero"] == 2


def test_beta_level2_betas_proportional():
    """At level 2 the even sector is one-dimensional: all three beta
    vectors coincide up to sign, so mutual orthogonality cannot hold."""
    rep = beta_report(2)
    res = rep["results"][("shifted", "even")]
    assert res["distinct"] == 1
    assert not res["orthogonal"]
