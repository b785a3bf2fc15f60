#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "jlc/error.hpp"
#include "jlc/quasiresolvent.hpp"

#include <cmath>

using namespace jlc;
using fixtures::random_vector;

namespace {
constexpr cplx I(0.0, 1.0);
}

TEST_CASE("truncation margin") {
    CHECK(truncation_margin(4) == 2);
    CHECK(truncation_margin(100) == 10);
    CHECK(truncation_margin(101) == 11);
}

TEST_CASE("O(N) application equals the dense kernel product") {
    std::mt19937_64 rng(11);
    const QuasiResolvent r(fixtures::lc_c(), cplx(0.5, 1.0), 60);
    const auto k = r.dense_kernel();
    const auto h = random_vector(rng, 61);
    const auto fast = r.apply(h);
    for (Index n = 0; n <= 60; ++n) {
        cplx s = 0.0;
        for (Index m = 0; m <= 60; ++m) s += k[n * 61 + m] * h[m];
        CHECK(std::abs(fast[n] - s) <= 1e-12 * std::max(1.0, std::abs(s)));
    }
}

TEST_CASE("right inverse of J - z on finitely supported vectors") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> len(1, 100);
    for (cplx z : {I, 2.0 * I, 1.0 + I}) {
        const QuasiResolvent r(fixtures::lc_a(), z, 400);
        for (int k = 0; k < 20; ++k) CHECK(r.residual(random_vector(rng, len(rng))) < 1e-8);
    }
    for (const auto* m : fixtures::all_models()) {
        const QuasiResolvent r(*m, 1.0 + I, 400);
        for (int k = 0; k < 5; ++k) CHECK(r.residual(random_vector(rng, len(rng)), true) < 1e-12);
    }
}

TEST_CASE("tilting q by a multiple of p keeps a right inverse") {
    std::mt19937_64 rng(13);
    const QuasiResolvent r(fixtures::lc_a(), I, 200);
    const auto t = r.tilted(cplx(0.3, -2.0));
    CHECK(t.residual(random_vector(rng, 30)) < 1e-8);
}

TEST_CASE("J q(w) = w q(w) + e_0 and J p(w) = w p(w)") {
    const cplx w(0.7, -0.4);
    const auto t = eval_pq(fixtures::model_c(), w, 50);
    const auto jq = apply_shifted_jacobi(fixtures::model_c(), t.q, w);
    const auto jp = apply_shifted_jacobi(fixtures::model_c(), t.p, w);
    CHECK(std::abs(jq[0] - 1.0) < 1e-13);
    CHECK(std::abs(jp[0]) < 1e-13);
    for (Index n = 1; n < 50; ++n) {
        CHECK(std::abs(jq[n]) < 1e-12);
        CHECK(std::abs(jp[n]) < 1e-12);
    }
}

TEST_CASE("maximal vectors: resolvent images and shifts") {
    std::mt19937_64 rng(14);
    const auto& m = fixtures::model_a();
    const cplx w(0.0, 1.0);
    const auto h = random_vector(rng, 12);
    const auto u = MaximalVector::resolvent_image(m, w, h);
    const auto direct = QuasiResolvent(fixtures::lc_a(), w, 80).apply(h);
    const auto vals = u.values(m, 80);
    for (Index n = 0; n <= 80; ++n) CHECK(std::abs(vals[n] - direct[n]) <= 1e-12 * std::max(1.0, std::abs(direct[n])));

    // (J - w) u = h exactly in this representation
    const auto s = u.shifted(m, w);
    CHECK(s.coef_p == cplx(0.0));
    CHECK(s.coef_q == cplx(0.0));
    for (Index n = 0; n < h.size(); ++n) CHECK(std::abs(s.finite[n] - h[n]) < 1e-12);
    for (Index n = h.size(); n < s.finite.size(); ++n) CHECK(std::abs(s.finite[n]) < 1e-12);

    // shifting at another point agrees with applying J - z to the values
    const cplx z(2.0, -1.0);
    const auto v = (u + MaximalVector::p_solution(w, 0.5)).shifted(m, z);
    const auto before = (u + MaximalVector::p_solution(w, 0.5)).values(m, 60);
    const auto after = v.values(m, 59);
    for (Index n = 0; n < 59; ++n) {
        cplx expect = (m.b(n) - z) * before[n] + m.a(n) * before[n + 1];
        if (n > 0) expect += m.a(n - 1) * before[n - 1];
        CHECK(std::abs(after[n] - expect) <= 1e-10 * std::max(1.0, std::abs(expect)));
    }
}

TEST_CASE("maximal vector algebra") {
    const auto a = MaximalVector::p_solution(I, 2.0) + MaximalVector::from_finite({1.0, 2.0});
    CHECK(a.entry0() == cplx(3.0));
    CHECK(a.scaled(I).coef_p == 2.0 * I);
    CHECK(a.support_end() == 3);
    CHECK_FALSE(a.is_finite());
    CHECK(MaximalVector::from_finite({1.0}).is_finite());
    CHECK_THROWS_AS(MaximalVector::p_solution(I) + MaximalVector::q_solution(2.0 * I), DomainError);
}

TEST_CASE("inner products of maximal vectors") {
    const auto& m = fixtures::model_a();
    const auto f = MaximalVector::from_finite({1.0, I, 3.0});
    const auto p = MaximalVector::p_solution(I);
    const auto t = eval_pq(m, I, 4);
    CHECK(std::abs(inner(m, f, p, 0) - (t.p[0] + I * std::conj(t.p[1]) + 3.0 * std::conj(t.p[2]))) < 1e-14);
    const InnerProductEvaluator ev(fixtures::lc_a(), 8192);
    CHECK(inner(m, p, p, 4096).real() == doctest::Approx(ev.p_norm_squared(I)).epsilon(1e-8));
    // <u, p(zeta)> is the bilinear pairing with p(conj zeta)
    CHECK(std::abs(pair_with_p(m, p, -I, 4096) - inner(m, p, MaximalVector::p_solution(-I), 4096)) <
          1e-14);
}

TEST_CASE("Gamma reads off the p(z) component") {
    std::mt19937_64 rng(15);
    for (const auto* lc : fixtures::all_models()) {
        const auto& m = lc->model();
        for (cplx z : {I, 1.0 + I}) {
            const auto h = random_vector(rng, 9);
            const cplx c(0.25, -1.5);
            const auto u = MaximalVector::resolvent_image(m, z, h) + MaximalVector::p_solution(z, c);
            CHECK(std::abs(gamma_coefficient(m, u, z, 0) - c) < 1e-8);
        }
    }
    // finitely supported vectors, exact arithmetic path
    const std::vector<cplx> u = {1.0, 2.0, -1.0};
    const auto& m = fixtures::model_a();
    const auto ju = apply_shifted_jacobi(m, u, I);
    const auto t = eval_pq(m, I, 6);
    cplx pairing = 0.0;
    for (Index n = 0; n < ju.size(); ++n) pairing += ju[n] * t.q[n];
    CHECK(std::abs(gamma_coefficient(m, u, I) - (u[0] - pairing)) < 1e-13);
}

TEST_CASE("decompositions of p(z) and q(z) against the origin") {
    for (const auto* lc : fixtures::all_models()) {
        const auto r = lemma_residuals(*lc, I, 400);
        CHECK(r.p_identity < 1e-6);
        CHECK(r.q_identity < 1e-6);
    }
    const auto ip = inner_products(fixtures::lc_a(), I);
    const auto r = lemma_residuals(fixtures::lc_a(), I, 1 << 14);
    CHECK(std::abs(r.pq0 - ip.pq0) < 1e-4);
}

TEST_CASE("Hilbert-Schmidt norm is Cauchy for a limit-circle model") {
    const QuasiResolvent r(fixtures::lc_a(), I, 3000);
    const auto hs = r.hs_norm(1e-2, Execution::serial);
    CHECK_FALSE(hs.growth_warning);
    CHECK(hs.value >= hs.half_value);
    CHECK(hs.value == doctest::Approx(kernel_frobenius_prefix(r.table().p, r.table().q)).epsilon(1e-10));
    CHECK(r.hs_norm(1e-2, Execution::parallel).value == doctest::Approx(hs.value).epsilon(1e-13));
}

TEST_CASE("quasiresolvent preconditions") {
    const QuasiResolvent r(fixtures::lc_a(), I, 10);
    CHECK_THROWS_AS(r.apply(std::vector<cplx>(12, 1.0)), DomainError);
    CHECK_THROWS_AS(QuasiResolvent(fixtures::lc_a(), I, 3), DomainError);
}
