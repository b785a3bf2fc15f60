#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "jlc/error.hpp"

#include <cmath>
#include <numbers>

using namespace jlc;
using fixtures::model_a;
using fixtures::model_b;
using fixtures::model_c;

TEST_CASE("power-law and geometric entries") {
    CHECK(model_a().a(0) == 1.0);
    CHECK(model_a().a(3) == 16.0);
    CHECK(model_a().b(7) == 0.0);
    CHECK(model_b().a(0) == 1.0);
    CHECK(model_b().a(10) == 1024.0);
    const auto shifted = CoefficientModel::make({PowerLaw{1.5, 3}, ZeroDiagonal{}, ""});
    CHECK(shifted.a(1) == doctest::Approx(8.0));
}

TEST_CASE("derived sequences against direct formulas") {
    const auto& m = model_a();
    for (Index n = 1; n < 50; ++n) {
        const double a0 = m.a(n - 1), a1 = m.a(n), a2 = m.a(n + 1);
        CHECK(m.alpha(n) == doctest::Approx(std::sqrt(a2 / a1)).epsilon(1e-14));
        CHECK(m.k(n) == doctest::Approx(a1 / std::sqrt(a0 * a2)).epsilon(1e-14));
        CHECK(m.beta(n) == 0.0);
        CHECK(*m.theta(n) == doctest::Approx(std::numbers::pi / 2));
    }
    CHECK(std::isnan(m.k(0)));
    CHECK(m.phi(4) == doctest::Approx(4 * std::numbers::pi / 2));
}

TEST_CASE("constant beta diagonal and the a_{-1} = a_0 convention") {
    const auto& m = model_c();
    CHECK(m.b(0) == doctest::Approx(-2.0 * 0.5 * m.a(0)));
    for (Index n : {0, 1, 5, 40}) CHECK(m.beta(n) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(*m.theta(3) == doctest::Approx(std::acos(0.5)));
    CHECK(m.uniform_beta());
    CHECK(m.asymptotics().beta_inf == 0.5);
    CHECK(m.asymptotics().boundary_scale() == doctest::Approx(std::sqrt(0.75)));
}

TEST_CASE("geometric model stays finite far out") {
    const auto& m = model_b();
    const Index n = m.usable_limit() - 2;
    CHECK(std::isfinite(m.k(n)));
    CHECK(m.k(n) == doctest::Approx(1.0));
    CHECK(m.beta(n) == 0.0);
    CHECK(m.asymptotics().alpha_inf == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("invalid descriptors are rejected") {
    CHECK_THROWS_AS(CoefficientModel::make({PowerLaw{0.0, 1}, ZeroDiagonal{}, ""}), DomainError);
    CHECK_THROWS_AS(CoefficientModel::make({PowerLaw{2.0, 0}, ZeroDiagonal{}, ""}), DomainError);
    CHECK_THROWS_AS(CoefficientModel::make({Geometric{1.0}, ZeroDiagonal{}, ""}), DomainError);
    try {
        CoefficientModel::make({Tabulated{{1.0, 2.0, -3.0, 4.0}}, ZeroDiagonal{}, ""});
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find('2') != std::string::npos);
    }
}

TEST_CASE("tabulated models end where the table ends") {
    std::vector<double> a(64);
    for (Index n = 0; n < a.size(); ++n) a[n] = std::pow(n + 1.0, 2.0);
    const auto m = CoefficientModel::make({Tabulated{a}, ZeroDiagonal{}, "t"});
    CHECK(m.max_index() == Index{63});
    CHECK(m.a(10) == model_a().a(10));
    CHECK_THROWS_AS((void)m.a(64), DomainError);
}

TEST_CASE("classification of the reference models") {
    CHECK(classify(model_a()).classification == Regime::LC_candidate);
    CHECK(classify(model_b()).classification == Regime::LC_candidate);
    CHECK(classify(model_c()).classification == Regime::LC_candidate);
    const auto r = classify(model_c());
    CHECK(r.beta_inf_estimate == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.phase_skip_count == 0);
}

TEST_CASE("limit-point models are not certified") {
    const auto linear = CoefficientModel::make({PowerLaw{1.0, 1}, ZeroDiagonal{}, ""});
    CHECK(classify(linear).classification == Regime::LP_carleman);
    CHECK_THROWS_AS(LcModel::certify(linear), DomainError);
    const auto large_beta = CoefficientModel::make({PowerLaw{2.0, 1}, ConstantBeta{2.0}, ""});
    CHECK(classify(large_beta).classification == Regime::LP_large_beta);
    CHECK(classify(large_beta).phase_skip_count > 0);
}

TEST_CASE("classification needs a usable horizon") {
    CHECK_THROWS_AS(classify(model_a(), 16), DomainError);
    const auto short_table = CoefficientModel::make({Tabulated{std::vector<double>(100, 1.0)}, ZeroDiagonal{}, ""});
    CHECK_THROWS_AS(classify(short_table, 1000), DomainError);
}

TEST_CASE("table materializes the same values") {
    const auto t = model_c().table(20);
    REQUIRE(t.size() == 21);
    for (Index n = 0; n <= 20; ++n) {
        CHECK(t.a[n] == model_c().a(n));
        CHECK(t.b[n] == model_c().b(n));
    }
}
