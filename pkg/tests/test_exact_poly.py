"""Exact arithmetic, parameter polynomials, and characteristic polynomials."""

import numpy as np
import pytest

from epspectra.exact_poly import (
    GaussianRational,
    ParamPoly,
    Rational,
    charpoly_of_tridiagonal,
    faddeev_leverrier,
    lowest_power,
    parse_exact_decimal,
    rat,
    realness_check,
    verify_trace_structure,
)
from epspectra.operators import (
    ModelParams,
    build_cartesian,
    build_hamiltonian,
    build_rotated_hamiltonian,
)
from epspectra import spectra


def gr(re, im=0):
    return GaussianRational(rat(re), rat(im))


def poly(*terms):
    p = ParamPoly()
    for e, c in terms:
        p = p + ParamPoly.monomial(e, c if isinstance(c, GaussianRational) else gr(c))
    return p


class TestRationals:
    def test_parse_exact_decimal(self):
        assert parse_exact_decimal("0.1") == Rational(1) / 10
        assert parse_exact_decimal("2.5e-3") == Rational(1) / 400
        assert parse_exact_decimal("-12.75") == Rational(-51) / 4
        assert parse_exact_decimal("3") == 3
        with pytest.raises(ValueError):
            parse_exact_decimal("1.2.3")

    def test_rat_from_string_and_float(self):
        assert rat("-3/4") == Rational(-3) / 4
        assert rat(0.5) == Rational(1) / 2
        assert rat(0.1) != Rational(1) / 10  # floats convert exactly, not by intent

    def test_gaussian_field_ops(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            a, b, c = (
                gr(int(rng.integers(-9, 10)), int(rng.integers(-9, 10))) for _ in range(3)
            )
            assert (a + b) * c == a * c + b * c
            assert a.conjugate().conjugate() == a
            assert (a * b).conjugate() == a.conjugate() * b.conjugate()
            if b:
                assert (a / b) * b == a

    def test_gaussian_zero_and_render(self):
        assert not gr(0, 0)
        assert gr(0, 1).render() == "1i"
        assert gr("-4645/2").render() == "-4645/2"


class TestParamPoly:
    def test_no_zero_coefficients_stored(self):
        p = poly((1, 3)) + poly((1, -3))
        assert not p
        assert p.coeffs == {}

    def test_lowest_power_examples(self):
        # the lambda^3 coefficient of the N=5 polynomial
        p = poly((1, 448), (3, gr("-4645/2")))
        assert lowest_power(p) == (1, gr(448))
        assert lowest_power(poly((0, -1))) == (0, gr(-1))
        # the constant term of the N=5 polynomial
        p = poly((2, 6400), (4, -30600), (6, gr("50625/64")))
        assert lowest_power(p) == (2, gr(6400))
        with pytest.raises(ValueError):
            lowest_power(ParamPoly())

    def test_mul_and_substitute(self):
        p = poly((0, 1), (1, 2))  # 1 + 2c
        q = poly((1, -1), (2, 3))  # -c + 3c^2
        prod = p * q
        assert prod == poly((1, -1), (2, 1), (3, 6))
        val = prod.substitute(rat("1/2"))
        assert val == gr("1/2")  # -1/2 + 1/4 + 6/8

    def test_render(self):
        p = poly((1, 448), (3, gr("-4645/2")))
        assert p.render("c") == "448 * c^1 - 4645/2 * c^3"


PAPER_N5_MONIC = {
    6: [(0, "1")],
    5: [(1, "-35")],
    4: [(2, "1743/4")],
    3: [(1, "448"), (3, "-4645/2")],
    2: [(2, "-6112"), (4, "82831/16")],
    1: [(3, "27280"), (5, "-58275/16")],
    0: [(2, "6400"), (4, "-30600"), (6, "50625/64")],
}


def rotated_charpoly(N, k=2, v=1):
    params = ModelParams(particles=N, gamma=v, v=v, c=None, pert_power=k)
    return faddeev_leverrier(build_rotated_hamiltonian(params))


class TestFaddeevLeVerrier:
    def test_n5_printed_coefficients(self):
        cp = rotated_charpoly(5)
        monic = cp.monic_coefficients()
        for j, terms in PAPER_N5_MONIC.items():
            expected = poly(*[(e, gr(s)) for e, s in terms])
            assert monic[j] == expected, f"lambda^{j}"

    def test_p0_and_p1(self):
        cp = rotated_charpoly(5)
        assert cp.paper_coeffs[0] == poly((0, -1))
        # p_1 = s_1 = tr(H~), a pure c^1 term
        assert cp.paper_coeffs[1] == cp.traces[1]
        assert set(cp.paper_coeffs[1].coeffs) == {1}

    def test_c_zero_gives_pure_power(self):
        cp = rotated_charpoly(7)
        monic_at_zero = cp.monic_at(0)
        assert monic_at_zero[-1] == 1
        assert all(c == 0 for c in monic_at_zero[:-1])

    def test_rejects_float_matrices(self):
        H = build_hamiltonian(ModelParams(particles=3, gamma=1, v=1, c=0.1), "orthonormal")
        with pytest.raises(TypeError):
            faddeev_leverrier(H)

    def test_newton_identity_crosscheck(self):
        for N in (3, 6, 9):
            cp = rotated_charpoly(N)
            recomputed = cp.newton_identity_traces()
            for k in range(1, cp.dim + 1):
                assert recomputed[k] == cp.traces[k]

    def test_continuant_matches_faddeev(self):
        rng = np.random.default_rng(11)
        for N in (2, 4, 7):
            g = rat(float(rng.uniform(0, 2)))
            c = rat(float(rng.uniform(0, 0.4)))
            H = build_hamiltonian(ModelParams(particles=N, gamma=g, v=1, c=c), "monomial")
            a = faddeev_leverrier(H)
            b = charpoly_of_tridiagonal(H)
            for k in range(N + 2):
                assert a.paper_coeffs[k] == b.paper_coeffs[k]
            for k in range(1, N + 2):
                assert a.traces[k] == b.traces[k]

    def test_continuant_rejects_nontridiagonal(self):
        H = build_rotated_hamiltonian(ModelParams(particles=4, gamma=1, v=1, c=None))
        with pytest.raises(ValueError):
            charpoly_of_tridiagonal(H)


class TestTraceStructure:
    def test_allowed_exponent_sets(self):
        # N large enough that no coefficient degenerates
        cp = rotated_charpoly(10)
        expected = {1: {1}, 2: {2}, 3: {1, 3}, 4: {2, 4}, 5: {3, 5}, 6: {2, 4, 6}}
        for k, exps in expected.items():
            assert set(cp.paper_coeffs[k].coeffs) == exps
            assert set(cp.traces[k].coeffs) == exps

    def test_report_contents(self):
        cp = rotated_charpoly(6)
        report = verify_trace_structure(cp)
        assert set(report.coeff_terms) == set(range(1, 8))
        # k=6 carries j = 0, 1, 2
        assert [j for j, _ in report.coeff_terms[6]] == [2, 1, 0]

    def test_structure_violation_asserts(self):
        cp = rotated_charpoly(4)
        cp.paper_coeffs[2] = poly((1, 1))  # inject an illegal c^1 term into p_2
        with pytest.raises(AssertionError):
            verify_trace_structure(cp)


class TestRealness:
    @pytest.mark.parametrize("N", [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12])
    def test_pt_symmetric_is_real(self, N):
        H = build_hamiltonian(
            ModelParams(particles=N, gamma=rat("2/3"), v=1, c=rat("1/7")), "monomial"
        )
        assert realness_check(charpoly_of_tridiagonal(H))

    def test_pt_symmetric_is_real_via_faddeev(self):
        H = build_hamiltonian(
            ModelParams(particles=6, gamma=rat("2/3"), v=1, c=rat("1/7")), "monomial"
        )
        assert realness_check(faddeev_leverrier(H))

    def test_complex_onsite_energy_breaks_realness(self):
        # epsilon with nonzero real part: H = 2 eps L_z + 2 v L_x, eps = 1 - i
        rep = ModelParams(particles=4, gamma=1, v=1, c=0).rep
        lz = build_cartesian(rep, "z", "monomial")
        lx = build_cartesian(rep, "x", "monomial")
        H = lz.scale(GaussianRational(2, -2)).add(lx.scale(GaussianRational(2)))
        assert not realness_check(faddeev_leverrier(H))

    def test_real_diagonal_matrix(self):
        rep = ModelParams(particles=5, gamma=0, v=1, c=0).rep
        lz = build_cartesian(rep, "z", "monomial")
        assert realness_check(faddeev_leverrier(lz))


class TestExactRootConsistency:
    def test_float_eigenvalues_are_near_roots(self):
        rng = np.random.default_rng(2024)
        for _ in range(20):
            N = int(rng.integers(2, 13))
            g = rat(float(rng.uniform(0, 2)))
            c = rat(float(rng.uniform(0, 1.0 / N)))
            params = ModelParams(particles=N, gamma=g, v=1, c=c)
            cp = charpoly_of_tridiagonal(build_hamiltonian(params, "monomial"))
            Hf = build_hamiltonian(
                ModelParams(particles=N, gamma=float(g), v=1.0, c=float(c)), "orthonormal"
            )
            # chi scales like length^(N+1); the residual bound must carry the
            # matrix scale or the gap product to sibling roots overflows it
            scale = max(1.0, Hf.max_abs())
            for lam in spectra.eigenvalues(Hf):
                lam_exact = GaussianRational(rat(float(lam.real)), rat(float(lam.imag)))
                chi = cp.evaluate_exact(lam_exact, 0)
                bound = 1e-6 * max(scale, abs(lam)) ** (N + 1)
                assert abs(complex(chi)) <= bound

    def test_delta_variant_hull_slopes(self):
        # k=1 rotated model in Delta: every hull slope is -1/2
        from epspectra.newton_polygon import analyze_unfolding

        for N in (4, 5, 8):
            cp = faddeev_leverrier(
                build_rotated_hamiltonian(
                    ModelParams(particles=N, gamma=1, v=1, c=None, pert_power=1)
                )
            )
            assert cp.param == "Delta"
            analysis = analyze_unfolding(cp)
            assert all(seg.mu == Rational(1) / 2 for seg in analysis.segments)
