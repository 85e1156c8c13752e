import numpy as np
import pytest

import cyclicpd as cp
from cyclicpd.inequalities import schur_complement

RNG = lambda s: np.random.default_rng(s)  # noqa: E731


def identity_family(n, p):
    return cp.CyclicFamily(tuple(cp.make_pd(np.eye(n)) for _ in range(p)))


def scalar_family(values):
    return cp.diagonal_embed(values, 1)


class TestTraceProduct:
    def test_identity(self):
        r = cp.check_trace_product(cp.make_pd(np.eye(2)), cp.make_pd(np.eye(2)))
        assert r.holds and r.lhs == 2.0 and r.rhs == 4.0

    def test_orthogonal_supports_boundary(self):
        a = cp.make_herm(np.diag([1.0, 0.0]))
        b = cp.make_herm(np.diag([0.0, 1.0]))
        r = cp.check_trace_product(a, b)
        assert r.holds and r.detail["tr_ab"] == 0.0

    def test_random(self):
        rng = RNG(0)
        for _ in range(100):
            assert cp.check_trace_product(cp.random_pd(4, rng), cp.random_pd(4, rng)).holds


class TestWeightedCS:
    def test_equality_boundary(self):
        n = 3
        r = cp.check_weighted_cs(np.eye(n), np.eye(n), cp.make_pd(np.eye(n)))
        assert r.holds
        assert r.lhs == pytest.approx(n * n, abs=1e-12)
        assert r.rhs == pytest.approx(n * n, abs=1e-12)

    def test_zero_case(self):
        r = cp.check_weighted_cs(np.eye(2), np.zeros((2, 2)), cp.make_pd(np.eye(2)))
        assert r.holds and r.lhs == 0.0

    def test_random_rectangular(self):
        rng = RNG(1)
        for _ in range(100):
            x = rng.standard_normal((3, 2))
            y = rng.standard_normal((3, 2))
            assert cp.check_weighted_cs(x, y, cp.random_pd(3, rng)).holds


class TestEigIneq1:
    def test_equal_operands_boundary(self):
        a = cp.make_pd([[3.0, 1.0], [1.0, 2.0]])
        r = cp.check_eigineq1(a, a)
        assert r.holds and abs(r.margin) < 1e-12

    def test_scaled_identity(self):
        r = cp.check_eigineq1(cp.make_pd(2 * np.eye(2)), cp.make_pd(np.eye(2)))
        assert r.holds and r.margin == pytest.approx(0.5, abs=1e-10)

    def test_cross_oracle(self):
        rng = RNG(2)
        for _ in range(100):
            a, b = cp.random_pd(3, rng), cp.random_pd(3, rng)
            r = cp.check_eigineq1(a, b)
            assert r.holds
            assert r.detail["direct_min_real"] >= -1e-8
            assert abs(r.detail["direct_min_real"] - r.margin) <= 1e-8 * (1 + abs(r.margin))


class TestHarmonicLoewner:
    def test_p1_boundary(self):
        fam = cp.CyclicFamily((cp.make_pd([[2.0, 1.0], [1.0, 3.0]]),))
        r = cp.check_harmonic_loewner(fam)
        assert r.holds and abs(r.margin) < 1e-12

    def test_identity_equality(self):
        for p in (1, 2, 4):
            r = cp.check_harmonic_loewner(identity_family(2, p))
            assert r.holds and abs(r.margin) < 1e-12

    def test_scalar_example(self):
        r = cp.check_harmonic_loewner(scalar_family([1.0, 2.0, 3.0]))
        assert r.holds
        assert r.margin == pytest.approx(11 / 6 - 9 / 6, abs=1e-12)


class TestBlockCertificate:
    def test_single_identity(self):
        cert = cp.build_block_certificate(identity_family(1, 1))
        assert np.allclose(cert.blocks["M"], [[1, 1], [1, 1]])
        assert np.allclose(np.linalg.eigvalsh(cert.blocks["M"]), [0, 2])

    def test_two_identity_schur(self):
        cert = cp.build_block_certificate(identity_family(1, 2))
        assert np.allclose(cert.blocks["M"], [[2, 2], [2, 2]])
        assert schur_complement(cert.blocks["M"], 1) == pytest.approx(0.0, abs=1e-12)

    def test_schur_matches_direct_margin(self):
        rng = RNG(3)
        for _ in range(50):
            fam = cp.random_family(3, 4, rng)
            r = cp.check_block_certificate(fam)
            assert r.holds
            assert r.detail["schur_gap"] <= 1e-8


class TestProductSumEigs:
    def test_identity_exact(self):
        for p in (1, 3, 5):
            r = cp.check_product_sum_eigs(identity_family(2, p))
            assert r.holds
            assert np.allclose(r.detail["eigs"], p * p, atol=1e-9)

    def test_scalar_pair(self):
        r = cp.check_product_sum_eigs(scalar_family([1.0, 4.0]))
        assert r.holds and r.lhs == pytest.approx(6.25, abs=1e-12)


class TestNesbitt:
    def test_identity_boundary(self):
        r = cp.check_nesbitt(*(cp.make_pd(np.eye(3)) for _ in range(3)))
        assert r.holds and abs(r.margin) < 1e-12
        assert np.allclose(r.detail["eigs"], 1.5, atol=1e-12)

    def test_scalar_123(self):
        a, b, c = (cp.make_pd([[v]]) for v in (1.0, 2.0, 3.0))
        r = cp.check_nesbitt(a, b, c)
        assert r.holds and r.lhs == pytest.approx(1.7, abs=1e-12)
        assert r.margin == pytest.approx(0.2, abs=1e-12)

    def test_construction_paths_agree(self):
        rng = RNG(4)
        for _ in range(100):
            r = cp.check_nesbitt(*(cp.random_pd(3, rng) for _ in range(3)))
            assert r.holds and r.detail["construction_gap"] <= 1e-9


class TestNesbittK:
    def test_identity_exact(self):
        for k in (2, 3, 5, 8):
            r = cp.check_nesbitt_k(identity_family(2, k))
            assert r.holds
            assert np.allclose(r.detail["eigs"], k / (k - 1), atol=1e-10)

    def test_k3_matches_nesbitt(self):
        rng = RNG(5)
        trip = [cp.random_pd(2, rng) for _ in range(3)]
        r1 = cp.check_nesbitt(*trip)
        r2 = cp.check_nesbitt_k(cp.CyclicFamily(tuple(trip)))
        assert r1.margin == pytest.approx(r2.margin, abs=1e-9)

    def test_scalar_k4(self):
        r = cp.check_nesbitt_k(scalar_family([1.0, 1.0, 1.0, 2.0]))
        assert r.lhs == pytest.approx(17 / 12, abs=1e-12)
        assert r.margin == pytest.approx(17 / 12 - 4 / 3, abs=1e-12)

    def test_k1_rejected(self):
        with pytest.raises(cp.SingularDenominator):
            cp.check_nesbitt_k(identity_family(2, 1))


class TestCyclicSumTrace:
    def test_identity(self):
        for n, p in [(1, 4), (2, 3), (3, 6)]:
            assert cp.cyclic_sum_trace(identity_family(n, p)) == pytest.approx(p * n / 2, abs=1e-12)

    def test_fixture_value(self):
        assert cp.cyclic_sum_trace(cp.counterexample_family()) == pytest.approx(5.2786, abs=1e-3)

    def test_scalar_equivalence(self):
        rng = RNG(6)
        for p in range(3, 10):
            s = rng.uniform(0.1, 10.0, p)
            fam = cp.diagonal_embed(s, 1)
            assert cp.cyclic_sum_trace(fam) == pytest.approx(
                cp.scalar_cyclic_sum(s), rel=1e-12)

    def test_p_too_small(self):
        with pytest.raises(ValueError):
            cp.cyclic_sum_trace(identity_family(2, 2))


class TestShapiroTrace:
    def test_identity_boundary(self):
        r = cp.check_shapiro_trace(identity_family(2, 5))
        assert r.holds and abs(r.margin) < 1e-12

    def test_fixture(self):
        r = cp.check_shapiro_trace(cp.counterexample_family())
        assert r.holds and r.lhs == pytest.approx(5.2786, abs=1e-3)


class TestS4Decomposition:
    def test_identity_boundaries(self):
        r = cp.check_s4_decomposition(*(cp.make_pd(np.eye(3)) for _ in range(4)))
        assert r.holds
        assert r.detail["tr_m"] == pytest.approx(6.0, abs=1e-12)
        assert abs(r.detail["margin_m"]) < 1e-12
        assert abs(r.detail["margin_m_plus_p"]) < 1e-12

    def test_fixture(self):
        r = cp.check_s4_decomposition(*cp.counterexample_fixture())
        assert r.holds
        assert r.detail["tr_m"] == pytest.approx(5.2786, abs=1e-3)
        assert r.detail["identity_residual"] <= 1e-12

    def test_random(self):
        rng = RNG(7)
        for _ in range(100):
            r = cp.check_s4_decomposition(*(cp.random_pd(3, rng) for _ in range(4)))
            assert r.holds


class TestShapiroExtension:
    def test_identity(self):
        r = cp.check_shapiro_extension(identity_family(2, 3))
        assert r.holds
        assert r.lhs == pytest.approx(5 * 2 / 2, abs=1e-12)

    def test_scalar_both_sides(self):
        s3 = cp.scalar_cyclic_sum([1, 2, 3])
        s5 = cp.scalar_cyclic_sum([1, 2, 3, 1, 2])
        assert s5 == pytest.approx(s3 + 1, abs=1e-12)
        r = cp.check_shapiro_extension(scalar_family([1.0, 2.0, 3.0]))
        assert r.holds and r.lhs == pytest.approx(s5, abs=1e-12)

    def test_fixture_extended(self):
        r = cp.check_shapiro_extension(cp.counterexample_family())
        assert r.holds
        assert r.lhs == pytest.approx(5.2786 + 2, abs=1e-3)


class TestBidirectional:
    def test_identity_boundary(self):
        r = cp.check_bidirectional(identity_family(2, 5))
        assert r.holds and abs(r.margin) < 1e-12

    def test_fixture(self):
        r = cp.check_bidirectional(cp.counterexample_family())
        assert r.holds
        assert r.detail["forward"] == pytest.approx(5.2786, abs=1e-3)
        assert r.lhs >= 8.0

    def test_holds_even_on_scalar_counterexample_regime(self):
        # large-spread scalars at p=14, where the one-directional bound can fail
        rng = RNG(8)
        for _ in range(20):
            s = np.exp(rng.uniform(-3, 3, 14))
            assert cp.check_bidirectional(cp.diagonal_embed(s, 1)).holds


class TestBidirectionalEig4:
    def test_identity_exact(self):
        r = cp.check_bidirectional_eig4(*(cp.make_pd(np.eye(2)) for _ in range(4)))
        assert r.holds and abs(r.margin) < 1e-10

    def test_scalars(self):
        s = [1.0, 2.0, 3.0, 4.0]
        fwd = cp.scalar_cyclic_sum(s)
        bwd = cp.scalar_cyclic_sum(s[::-1])
        r = cp.check_bidirectional_eig4(*(cp.make_pd([[v]]) for v in s))
        assert r.holds
        assert r.lhs == pytest.approx(fwd + bwd, abs=1e-12)

    def test_fixture(self):
        r = cp.check_bidirectional_eig4(*cp.counterexample_fixture())
        assert r.holds and r.lhs >= 4.0


class TestCSTrace:
    def test_equality(self):
        a = RNG(9).standard_normal((2, 3))
        r = cp.check_cs_trace(a, a)
        assert r.holds and r.margin == pytest.approx(0.0, abs=1e-9)

    def test_zero(self):
        r = cp.check_cs_trace(np.ones((2, 2)), np.zeros((2, 2)))
        assert r.holds and r.lhs == 0.0

    def test_random_complex(self):
        rng = RNG(10)
        for _ in range(100):
            a = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
            b = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
            assert cp.check_cs_trace(a, b).holds


class TestUpperBound2AB:
    def test_scalar_double_boundary(self):
        r = cp.check_upper_bound_2ab(*(cp.make_pd([[1.0]]) for _ in range(3)))
        assert r.holds
        assert r.detail["tr_m"] == pytest.approx(1.0, abs=1e-12)
        assert r.detail["tr_n"] == pytest.approx(1.0, abs=1e-12)

    def test_identity_2x2(self):
        r = cp.check_upper_bound_2ab(*(cp.make_pd(np.eye(2)) for _ in range(3)))
        assert r.holds
        assert r.detail["tr_m"] == pytest.approx(2.0, abs=1e-12)
        assert r.rhs == 2.5

    def test_random(self):
        rng = RNG(11)
        for _ in range(100):
            r = cp.check_upper_bound_2ab(*(cp.random_pd(3, rng) for _ in range(3)))
            assert r.holds


class TestWZCertificate:
    def test_scalar_identity(self):
        cert = cp.build_wz_certificate(*(cp.make_pd([[1.0]]) for _ in range(3)))
        assert cert.blocks["W_1"][0, 0] == pytest.approx(3 ** -0.5, abs=1e-12)
        w, z = cert.blocks["W"], cert.blocks["Z"]
        assert (w @ z.T)[0, 0] == pytest.approx(3.0, abs=1e-12)
        assert (z @ z.T)[0, 0] == pytest.approx(9.0, abs=1e-12)
        r = cp.check_wz_certificate(*(cp.make_pd([[1.0]]) for _ in range(3)))
        assert r.holds and r.lhs == pytest.approx(1.0, abs=1e-12)

    def test_identity_2x2_quotient(self):
        r = cp.check_wz_certificate(*(cp.make_pd(np.eye(2)) for _ in range(3)))
        assert r.holds
        assert r.detail["tr_zz"] == pytest.approx(18.0, abs=1e-12)
        assert r.lhs == pytest.approx(2.0, abs=1e-12)

    def test_random_identities(self):
        rng = RNG(12)
        for _ in range(100):
            r = cp.check_wz_certificate(*(cp.random_pd(3, rng) for _ in range(3)))
            assert r.holds
            assert r.detail["wz_residual"] <= 1e-9 * 100


class TestSquareCycle:
    def test_identity_boundary(self):
        r = cp.check_square_cycle(identity_family(3, 4))
        assert r.holds and abs(r.margin) < 1e-10

    def test_scalar_pair(self):
        r = cp.check_square_cycle(scalar_family([1.0, 2.0]))
        assert r.holds
        assert r.lhs == pytest.approx(4.5, abs=1e-12)
        assert r.rhs == pytest.approx(3.0, abs=1e-12)

    def test_random_with_certificate(self):
        rng = RNG(13)
        for _ in range(50):
            r = cp.check_square_cycle(cp.random_family(3, 5, rng))
            assert r.holds
            assert max(r.detail["wz_residual"], r.detail["zz_residual"]) <= 1e-8


class TestCounterexampleReproduction:
    def test_eigenvalue_pair(self):
        r = cp.reproduce_counterexample()
        eigs = np.asarray(r.detail["eigs"])
        assert np.allclose(eigs, [2.6393 - 0.1871j, 2.6393 + 0.1871j], atol=1e-3)

    def test_trace(self):
        r = cp.reproduce_counterexample()
        assert r.detail["trace"] == pytest.approx(5.2786, abs=1e-3)
        assert r.detail["trace"] >= 4.0

    def test_nonreal(self):
        r = cp.reproduce_counterexample()
        assert r.detail["max_imag"] == pytest.approx(0.1871, abs=1e-3)
        assert r.detail["eigenvalue_form_fails"]


class TestReportSerialization:
    def test_to_dict_schema(self):
        r = cp.check_nesbitt(*(cp.make_pd(np.eye(2)) for _ in range(3)))
        d = r.to_dict()
        assert set(d) == {"check", "n", "p", "holds", "margin", "lhs", "rhs", "detail", "tol"}
        assert d["tol"] == {"rel": 1e-9, "abs": 1e-12}
        import json

        json.dumps(d)
