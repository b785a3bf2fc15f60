#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "jlc/error.hpp"
#include "jlc/jost.hpp"

#include <cmath>
#include <numbers>

using namespace jlc;

namespace {

constexpr cplx I(0.0, 1.0);

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

MaximalVector random_maximal(const CoefficientModel& m, std::mt19937_64& rng, cplx w) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto h = fixtures::random_vector(rng, 6);
    return MaximalVector::resolvent_image(m, w, h) + MaximalVector::p_solution(w, cplx(u(rng), u(rng))) +
           MaximalVector::q_solution(w, cplx(u(rng), u(rng)));
}

}  // namespace

TEST_CASE("Wronskian of the Jost pair") {
    CHECK(jost_wronskian_target(fixtures::lc_a()) == cplx(0.0, -2.0));
    CHECK(std::abs(jost_wronskian_target(fixtures::lc_b()) - cplx(0.0, -2.0 / std::sqrt(2.0))) < 1e-15);
    CHECK(std::abs(jost_wronskian_target(fixtures::lc_c()) - cplx(0.0, -2.0 * std::sqrt(0.75))) < 1e-15);
    for (const auto* lc : fixtures::all_models())
        for (cplx z : {cplx(0.0), I, cplx(-2.0, 0.5)}) CHECK(jost_solutions(*lc, z).wronskian_deviation < 1e-6);
}

TEST_CASE("seed error falls with the initialization index") {
    const auto& lc = fixtures::lc_c();
    const double coarse = JostSolver(lc, 256).solve(I).wronskian_deviation;
    const double fine = JostSolver(lc, 2048).solve(I).wronskian_deviation;
    CHECK(fine < coarse / 16.0);
}

TEST_CASE("Jost solutions behave like a_n^{-1/2} e^{+-i phi_n}") {
    const auto& lc = fixtures::lc_a();
    const auto d = jost_solutions(lc, cplx(1.0, 1.0));
    const Index n = d.n_start;
    const cplx expect = std::polar(1.0 / std::sqrt(lc.a(n)), lc.model().phi(n));
    CHECK(std::abs(d.f_plus[n] - expect) < 1e-3 * std::abs(expect));
}

TEST_CASE("polynomials expand in the Jost pair") {
    for (const auto* lc : fixtures::all_models()) {
        const auto d = jost_solutions(*lc, I);
        const auto t = eval_pq(lc->model(), I, d.n_start + 1);
        const auto c = scattering_coeffs(*lc, d, t);
        const Band band = interior_band(d.n_start);
        for (Index n = band.lo; n <= band.hi; n += std::max<Index>(1, (band.hi - band.lo) / 8)) {
            const cplx p = c.sigma_plus * d.f_plus[n] + c.sigma_minus * d.f_minus[n];
            const cplx q = c.tau_plus * d.f_plus[n] + c.tau_minus * d.f_minus[n];
            CHECK(std::abs(p - t.p[n]) < 1e-6 * std::abs(c.sigma_plus) / std::sqrt(lc->a(n)));
            CHECK(std::abs(q - t.q[n]) < 1e-6 * std::abs(c.tau_plus) / std::sqrt(lc->a(n)));
        }
    }
}

TEST_CASE("determinant and modulus identities at z = i") {
    for (const auto* lc : fixtures::all_models()) {
        const auto c = scattering_coeffs(*lc, I);
        CHECK(c.identity_residual < 1e-6);
        const InnerProductEvaluator ev(*lc, choose_truncation(*lc, std::vector<cplx>{I}));
        const double lhs = std::norm(c.sigma_plus) - std::norm(c.sigma_minus);
        const double rhs = ev.p_norm_squared(I) / lc->asymptotics().boundary_scale();
        CHECK(std::abs(lhs - rhs) < 1e-6 * rhs);
    }
}

TEST_CASE("on the real axis sigma_- is the conjugate of sigma_+") {
    const auto c = scattering_coeffs(fixtures::lc_c(), cplx(1.3));
    CHECK(std::abs(c.sigma_minus - std::conj(c.sigma_plus)) < 1e-7 * std::abs(c.sigma_plus));
    CHECK(std::abs(c.tau_minus - std::conj(c.tau_plus)) < 1e-7 * std::abs(c.tau_plus));
}

TEST_CASE("boundary data") {
    std::mt19937_64 rng(31);
    for (const auto* lc : fixtures::all_models()) {
        const auto c0 = scattering_coeffs(*lc, 0.0);
        const auto ci = scattering_coeffs(*lc, I);
        for (int k = 0; k < 3; ++k) {
            const auto s = boundary_data(*lc, MaximalVector::from_finite(fixtures::random_vector(rng, 10)), c0);
            CHECK(std::abs(s.s_plus) < 1e-8);
            CHECK(std::abs(s.s_minus) < 1e-8);
        }
        const auto sp = boundary_data(*lc, MaximalVector::p_solution(I), c0);
        const auto sq = boundary_data(*lc, MaximalVector::q_solution(I), c0);
        CHECK(rel(sp.s_plus, ci.sigma_plus) < 1e-6);
        CHECK(rel(sp.s_minus, ci.sigma_minus) < 1e-6);
        CHECK(rel(sq.s_plus, ci.tau_plus) < 1e-6);
        CHECK(rel(sq.s_minus, ci.tau_minus) < 1e-6);
        const auto u = random_maximal(lc->model(), rng, cplx(0.5, 1.0));
        const auto a = boundary_data(*lc, u, c0), b = boundary_data(*lc, u, ci);
        CHECK(rel(a.s_plus, b.s_plus) < 1e-6);
        CHECK(rel(a.s_minus, b.s_minus) < 1e-6);
    }
}

TEST_CASE("boundary data is linear") {
    std::mt19937_64 rng(32);
    const auto& lc = fixtures::lc_c();
    const auto c0 = scattering_coeffs(lc, 0.0);
    const auto u = random_maximal(lc.model(), rng, I), v = random_maximal(lc.model(), rng, I);
    const cplx k(0.3, -0.8);
    const auto su = boundary_data(lc, u, c0), sv = boundary_data(lc, v, c0);
    const auto sum = boundary_data(lc, u + v.scaled(k), c0);
    CHECK(rel(sum.s_plus, su.s_plus + k * sv.s_plus) < 1e-10);
    CHECK(rel(sum.s_minus, su.s_minus + k * sv.s_minus) < 1e-10);
}

TEST_CASE("omega parameter") {
    CHECK_THROWS_AS(ExtensionParamOmega::make(cplx(1.0, 1.0)), DomainError);
    CHECK_THROWS_AS(ExtensionParamOmega::make(0.0), DomainError);
    const auto w = ExtensionParamOmega::from_angle(std::numbers::pi / 2);
    CHECK(std::abs(w.value() - I) < 1e-15);
    CHECK(w.angle() == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("gamma_omega is Herglotz and conjugate symmetric") {
    for (const auto* lc : fixtures::all_models()) {
        for (cplx w : {cplx(1.0), I, cplx(-1.0), std::polar(1.0, 2.0)}) {
            const auto omega = ExtensionParamOmega::make(w);
            const cplx up = gamma_omega(*lc, I, omega);
            CHECK(up.imag() > 0.0);
            // conj symmetry pairs omega with conj(omega)^{-1} = omega on the circle
            CHECK(rel(gamma_omega(*lc, -I, omega), std::conj(up)) < 1e-8);
        }
    }
}

TEST_CASE("omega extensions coincide with calibrated t extensions") {
    const auto& lc = fixtures::lc_c();
    const auto omega = ExtensionParamOmega::make(I);
    const auto cal = calibrate_omega(lc, omega, I);
    CHECK(cal.imag_residual < 1e-6);
    CHECK(std::abs(gamma_omega(lc, 2.0 * I, omega) - gamma_t(lc, 2.0 * I, cal.t)) < 1e-6);
    const Window w{-20.0, 20.0};
    const auto se = omega_eigenvalues(lc, omega, w);
    const auto st = eigenvalues(lc, cal.t, w);
    CHECK(se.warnings.empty());
    REQUIRE(se.eigenvalues.size() == st.eigenvalues.size());
    for (Index k = 0; k < se.eigenvalues.size(); ++k) CHECK(std::abs(se.eigenvalues[k] - st.eigenvalues[k]) < 1e-6);
}

TEST_CASE("Green pairing: band limit against the boundary form") {
    std::mt19937_64 rng(33);
    for (const auto* lc : fixtures::all_models()) {
        const auto& m = lc->model();
        for (int k = 0; k < 3; ++k) {
            const auto g = green_pairing(*lc, random_maximal(m, rng, cplx(0.0, 1.0)), random_maximal(m, rng, cplx(0.0, 1.0)));
            CHECK(rel(g.boundary_form, g.band_limit) < 1e-6);
        }
        const auto p = MaximalVector::p_solution(I);
        const auto g = green_pairing(*lc, p, p);
        const InnerProductEvaluator ev(*lc, choose_truncation(*lc, std::vector<cplx>{I}));
        const cplx expect = 2.0 * I * ev.p_norm_squared(I);
        CHECK(std::abs(g.band_limit - expect) < 1e-6 * std::abs(expect));
        CHECK(std::abs(g.boundary_form - expect) < 1e-6 * std::abs(expect));
    }
}

TEST_CASE("Green pairing vanishes for a real-parameter solution with itself") {
    const auto u = MaximalVector::p_solution(1.5);
    const auto g = green_pairing(fixtures::lc_a(), u, u);
    CHECK(std::abs(g.band_limit) < 1e-8);
    CHECK(std::abs(g.boundary_form) < 1e-6);
}

TEST_CASE("Jost failure modes") {
    CHECK_THROWS_AS(JostSolver(fixtures::lc_a(), 4), DomainError);
    CHECK_THROWS_AS(JostSolver(fixtures::lc_b(), 2000), DomainError);
    JostOptions impossible;
    impossible.tol = 1e-300;
    impossible.n_start = 64;
    impossible.max_retries = 1;
    try {
        jost_solutions(fixtures::lc_a(), I, impossible);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.achieved() > 0.0);
    }
}
