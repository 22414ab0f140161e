"""Tests for GF(2^m) arithmetic."""
import numpy as np
import pytest

from src.exceptions import ConfigurationError
from src.outer_code import PRIMITIVE_POLYNOMIALS, field_build, field_inv, field_mul, field_mul_reference


class TestFieldBuild:
    """Table construction."""

    @pytest.mark.parametrize("m", sorted(PRIMITIVE_POLYNOMIALS))
    def test_exp_table_cycles_through_every_nonzero_element(self, m):
        if m > 16:
            pytest.skip("large degrees are exercised by the slow suite")
        f = field_build(m)
        cycle = f.exp_table[: f.order]
        assert sorted(cycle.tolist()) == list(range(1, f.size))
        assert f.exp_table[f.order] == 1

    @pytest.mark.slow
    @pytest.mark.parametrize("m", [17, 18, 19, 20])
    def test_large_degrees_build(self, m):
        f = field_build(m)
        assert len(np.unique(f.exp_table[: f.order])) == f.order

    @pytest.mark.parametrize("m", [0, 1, 21])
    def test_degree_out_of_range(self, m):
        with pytest.raises(ConfigurationError):
            field_build(m)

    def test_build_is_cached(self):
        assert field_build(5) is field_build(5)

    def test_canonical_element_order(self):
        f = field_build(3)
        assert [f.element_at(i) for i in range(8)] == [0, 1, 2, 4, 3, 6, 7, 5]


class TestFieldOps:
    """Multiplication, inversion and the table-free oracle."""

    @pytest.mark.parametrize("m", [2, 3, 4, 5, 8])
    def test_mul_matches_carryless_reference(self, m):
        f = field_build(m)
        for a in range(f.size):
            for b in range(0, f.size, max(1, f.size // 32)):
                assert field_mul(f, a, b) == field_mul_reference(f, a, b)

    def test_gf8_multiplication_values(self, gf8):
        assert field_mul(gf8, 2, 4) == 3      # x * x^2 = x^3 = x + 1
        assert field_mul(gf8, 6, 7) == 4
        assert field_mul(gf8, 0, 5) == 0

    @pytest.mark.parametrize("m", [2, 4, 8, 12])
    def test_every_nonzero_element_has_inverse(self, m):
        f = field_build(m)
        elements = np.arange(1, f.size)
        inverses = np.array([field_inv(f, int(a)) for a in elements])
        assert np.all(f.mul_array(elements, inverses) == 1)

    def test_inverse_of_zero(self, gf8):
        with pytest.raises(ZeroDivisionError):
            field_inv(gf8, 0)

    def test_division_undoes_multiplication(self, gf8):
        for a in range(8):
            for b in range(1, 8):
                assert gf8.div(gf8.mul(a, b), b) == a

    def test_pow_follows_group_order(self, gf8):
        for a in range(1, 8):
            assert gf8.pow(a, 7) == 1
        assert gf8.pow(0, 0) == 1

    def test_matmul_distributes_over_xor(self, gf8, rng):
        x = rng.integers(0, 8, size=(3, 4))
        y = rng.integers(0, 8, size=(4, 2))
        z = rng.integers(0, 8, size=(4, 2))
        assert np.array_equal(gf8.matmul(x, y ^ z), gf8.matmul(x, y) ^ gf8.matmul(x, z))


def _assert_ring_axioms(f, a, b, c):
    mul = f.mul_array
    assert np.array_equal(mul(mul(a, b), c), mul(a, mul(b, c)))
    assert np.array_equal(mul(a, b), mul(b, a))
    assert np.array_equal(mul(a, b ^ c), mul(a, b) ^ mul(a, c))


class TestFieldAxioms:
    """Associativity, commutativity and distributivity of the table arithmetic."""

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_every_triple(self, m):
        f = field_build(m)
        a, b, c = (v.ravel() for v in np.meshgrid(*[np.arange(f.size)] * 3, indexing="ij"))
        _assert_ring_axioms(f, a, b, c)

    @pytest.mark.parametrize("m", [5, 8, 12, 16])
    def test_random_triples(self, m, rng):
        f = field_build(m)
        a, b, c = rng.integers(0, f.size, size=(3, 10_000))
        _assert_ring_axioms(f, a, b, c)
        sample = slice(0, 200)
        expected = [field_mul_reference(f, int(x), int(y)) for x, y in zip(a[sample], b[sample])]
        assert f.mul_array(a[sample], b[sample]).tolist() == expected
