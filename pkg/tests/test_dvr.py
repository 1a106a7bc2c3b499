"""Ring arithmetic, valuations, precision tracking, and exactness."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iwacalc import DvrSpec, PreconditionError, PrecisionError, eq_status, valuation

Z3 = DvrSpec(3)
Z5 = DvrSpec(5)
RAM3 = DvrSpec(3, e=2, defining_poly=(-3, 0))      # pi^2 = 3
EIS5 = DvrSpec(5, e=2, defining_poly=(5, 10))      # x^2 + 10x + 5
UNR3 = DvrSpec(3, f=2, defining_poly=(1, 0))       # x^2 + 1 irreducible mod 3


class TestSpecValidation:
    def test_rejects_composite_p(self):
        with pytest.raises(PreconditionError):
            DvrSpec(6)

    def test_rejects_even_p(self):
        with pytest.raises(PreconditionError):
            DvrSpec(2)

    def test_rejects_degree_above_two(self):
        with pytest.raises(PreconditionError):
            DvrSpec(3, e=2, f=2, defining_poly=(3, 0))

    def test_ramified_requires_eisenstein(self):
        with pytest.raises(PreconditionError):
            DvrSpec(3, e=2, defining_poly=(9, 0))  # v(c0) = 2

    def test_unramified_requires_irreducible(self):
        with pytest.raises(PreconditionError):
            DvrSpec(3, f=2, defining_poly=(-1, 0))  # x^2 - 1 splits mod 3

    def test_default_precision_is_12e(self):
        assert Z3.default_precision == 12
        assert RAM3.default_precision == 24


class TestValuation:
    def test_valuation_of_p_is_one(self):
        assert valuation(Z3.from_int(3)) == 1

    def test_valuation_of_unit_is_zero(self):
        assert valuation(Z3.from_int(7)) == 0

    def test_valuation_of_p_in_ramified_ring_is_two(self):
        assert valuation(RAM3.from_int(3)) == 2

    def test_valuation_of_uniformizer(self):
        assert valuation(RAM3.uniformizer()) == 1
        assert valuation(Z3.uniformizer()) == 1

    def test_valuation_in_unramified_ring_counts_p(self):
        assert valuation(UNR3.elem((3, 6))) == 1
        assert valuation(UNR3.elem((0, 9))) == 2

    def test_zero_at_precision_is_none(self):
        x = Z3.elem((3 ** 13,), prec=12, exact=False)
        assert valuation(x) is None

    def test_exact_element_reports_valuation_beyond_precision(self):
        x = Z3.from_int(3 ** 15, prec=12)
        assert valuation(x) == 15

    def test_exact_zero(self):
        z = Z3.zero()
        assert z.is_exact_zero
        assert valuation(z) is None


class TestEqStatus:
    def test_true_requires_exact_zero_difference(self):
        assert eq_status(Z3.from_int(5), Z3.from_int(5)) is True

    def test_false_for_determined_difference(self):
        assert eq_status(Z3.from_int(5), Z3.from_int(5 + 27)) is False

    def test_none_when_difference_vanishes_at_precision(self):
        a = Z3.elem((5,), prec=6, exact=False)
        b = Z3.elem((5 + 3 ** 7,), prec=6, exact=False)
        assert eq_status(a, b) is None

    def test_dunder_eq_means_definitely_equal(self):
        assert Z3.from_int(4) == Z3.from_int(4)
        assert not (Z3.from_int(4) == Z3.from_int(5))

    def test_not_hashable(self):
        with pytest.raises(TypeError):
            hash(Z3.from_int(1))


class TestPrecisionRules:
    def test_mul_precision(self):
        x = Z3.elem((9,), prec=5, exact=False)    # v = 2, N = 5
        y = Z3.elem((27,), prec=7, exact=False)   # v = 3, N = 7
        assert (x * y).prec == min(2 + 7, 3 + 5)

    def test_add_takes_min_precision(self):
        x = Z3.elem((1,), prec=5, exact=False)
        y = Z3.elem((1,), prec=9, exact=False)
        assert (x + y).prec == 5

    def test_shift_down_reduces_precision(self):
        x = Z3.from_int(9, prec=6)
        assert x.shift_down(2).prec == 4
        assert valuation(x.shift_down(2)) == 0

    def test_shift_down_requires_divisibility(self):
        with pytest.raises(PreconditionError):
            Z3.from_int(4).shift_down(1)

    def test_shift_down_exhausting_precision(self):
        x = Z3.elem((9,), prec=2, exact=False)
        with pytest.raises(PrecisionError):
            x.shift_down(2)

    def test_exact_zero_times_inexact_is_exact_zero(self):
        x = Z3.from_int(7).unit_inverse()  # inexact
        assert not x.exact
        assert (Z3.zero() * x).is_exact_zero


class TestInversion:
    @pytest.mark.parametrize("spec", [Z3, Z5, RAM3, EIS5, UNR3])
    def test_unit_inverse_roundtrip(self, spec):
        for n in (1, 2, spec.p + 1, spec.p ** 2 - 1):
            x = spec.from_int(n)
            if valuation(x) != 0:
                continue
            prod = x * x.unit_inverse()
            assert eq_status(prod, spec.one()) is not False

    def test_unit_inverse_of_quadratic_element(self):
        x = UNR3.elem((2, 5))
        prod = x * x.unit_inverse()
        assert eq_status(prod, UNR3.one()) is not False

    def test_unit_inverse_rejects_nonunit(self):
        with pytest.raises(PreconditionError):
            Z3.from_int(3).unit_inverse()

    def test_divide_exact(self):
        q = Z3.from_int(18).divide_exact(Z3.from_int(6))
        assert eq_status(q, Z3.from_int(3)) is not False


class TestRamifiedShift:
    def test_pi_shift_roundtrip(self):
        x = RAM3.elem((6, 3))
        down = x.shift_down(2)  # divide by pi^2 = 3
        assert eq_status(down, RAM3.elem((2, 1), down.prec)) is not False

    def test_uniformizer_square_is_p(self):
        pi2 = RAM3.uniformizer() ** 2
        assert eq_status(pi2, RAM3.from_int(3)) is not False

    def test_eisenstein_shift_down(self):
        pi = EIS5.uniformizer()
        x = pi * EIS5.from_int(7)
        assert eq_status(x.shift_down(1), EIS5.from_int(7, x.prec - 1)) is not False


@st.composite
def exact_pairs(draw):
    spec = draw(st.sampled_from([Z3, Z5, RAM3, UNR3]))
    mk = lambda: spec.elem(tuple(draw(st.integers(-200, 200))
                                 for _ in range(spec.degree)))
    return spec, mk(), mk(), mk()


@settings(max_examples=60, deadline=None)
@given(exact_pairs())
def test_ring_axioms_on_exact_elements(data):
    spec, x, y, z = data
    assert eq_status((x + y) * z, x * z + y * z) is True
    assert eq_status(x * y, y * x) is True
    assert eq_status((x * y) * z, x * (y * z)) is True
    assert eq_status(x - x, spec.zero()) is True


@settings(max_examples=60, deadline=None)
@given(exact_pairs())
def test_valuation_is_multiplicative_on_exact_elements(data):
    spec, x, y, _ = data
    vx, vy = valuation(x), valuation(y)
    if vx is None or vy is None:  # one factor is exactly zero
        assert valuation(x * y) is None
    else:
        assert valuation(x * y) == vx + vy
