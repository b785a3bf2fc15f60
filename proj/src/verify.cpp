#include "jlc/verify.hpp"

#include "jlc/error.hpp"
#include "jlc/jost.hpp"
#include "jlc/polynomials.hpp"
#include "jlc/quasiresolvent.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace jlc {

namespace {

constexpr cplx I(0.0, 1.0);

std::vector<cplx> random_vector(std::mt19937_64& rng, Index length) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> h(length);
    for (auto& v : h) v = cplx(u(rng), u(rng));
    return h;
}

MaximalVector random_maximal(const CoefficientModel& m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto h = random_vector(rng, 8);
    return MaximalVector::resolvent_image(m, 0.0, h) + MaximalVector::p_solution(0.0, cplx(u(rng), u(rng)));
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

class Suite {
public:
    explicit Suite(std::vector<CheckResult>& out) : out_(out) {}

    void check(const std::string& name, double tol, const std::function<double(std::string&)>& body) {
        CheckResult r;
        r.name = name;
        r.tolerance = tol;
        try {
            r.residual = body(r.detail);
            r.passed = r.residual < tol;
        } catch (const std::exception& e) {
            r.residual = std::numeric_limits<double>::infinity();
            r.passed = false;
            r.detail = e.what();
        }
        out_.push_back(std::move(r));
    }

private:
    std::vector<CheckResult>& out_;
};

}  // namespace

std::vector<CheckResult> run_identity_suite(const LcModel& model, const SuiteOptions& opts) {
    std::vector<CheckResult> results;
    Suite suite(results);
    const auto& m = model.model();
    std::mt19937_64 rng(opts.seed);
    const Index N = std::min(opts.N, m.usable_limit() - 2);
    JostOptions jost;
    jost.tol = opts.tol;

    suite.check("wronskian_pq", 1e-10, [&](std::string&) {
        double worst = 0.0;
        for (cplx z : {cplx(0.0), cplx(1.0), I, 1.0 + I}) {
            const auto t = eval_pq(m, z, N);
            for (Index n = 0; n + 1 <= N; ++n) worst = std::max(worst, std::abs(wronskian(m, t.p, t.q, n) - 1.0));
        }
        return worst;
    });

    suite.check("quasiresolvent_identity", 1e-8, [&](std::string& detail) {
        double worst = 0.0;
        std::uniform_int_distribution<Index> len(1, std::max<Index>(1, N / 4));
        for (cplx z : {I, 2.0 * I, 1.0 + I}) {
            const QuasiResolvent r(model, z, N);
            for (int k = 0; k < 20; ++k) worst = std::max(worst, r.residual(random_vector(rng, len(rng)), true));
        }
        detail = "row-scaled, 20 random h per z";
        return worst;
    });

    suite.check("lemma_decomposition", 1e-6, [&](std::string&) {
        const auto r = lemma_residuals(model, I, N);
        return std::max(r.p_identity, r.q_identity);
    });

    const Index ip_N = choose_truncation(model, std::vector<cplx>{I});
    const InnerProductEvaluator ev(model, ip_N);
    const std::vector<ExtensionParamT> ts = {ExtensionParamT::finite(-2), ExtensionParamT::finite(-1),
                                             ExtensionParamT::finite(0),  ExtensionParamT::finite(1),
                                             ExtensionParamT::finite(2),  ExtensionParamT::infinity()};

    suite.check("gamma_conjugate_symmetry", 1e-10, [&](std::string&) {
        double worst = 0.0;
        const auto up = ev.at(I), down = ev.at(-I);
        for (const auto& t : ts) worst = std::max(worst, rel(gamma_t(down, -I, t), std::conj(gamma_t(up, I, t))));
        return worst;
    });

    suite.check("gamma_herglotz", 0.5, [&](std::string& detail) {
        double lowest = std::numeric_limits<double>::infinity();
        const auto up = ev.at(I);
        for (const auto& t : ts) lowest = std::min(lowest, gamma_t(up, I, t).imag());
        detail = "min Im gamma_t(i) = " + std::to_string(lowest);
        return lowest > 0.0 ? 0.0 : 1.0;
    });

    suite.check("jost_wronskian", 1e-6, [&](std::string&) {
        double worst = 0.0;
        for (cplx z : {cplx(0.0), I, 1.0 + I}) worst = std::max(worst, jost_solutions(model, z, jost).wronskian_deviation);
        return worst;
    });

    suite.check("sigma_tau_identity", 1e-6, [&](std::string&) { return scattering_coeffs(model, I, jost).identity_residual; });

    suite.check("modulus_identity", 1e-6, [&](std::string&) {
        const auto c = scattering_coeffs(model, I, jost);
        const double lhs = std::norm(c.sigma_plus) - std::norm(c.sigma_minus);
        const double rhs = ev.p_norm_squared(I) / model.asymptotics().boundary_scale();
        return std::abs(lhs - rhs) / std::abs(rhs);
    });

    const ScatteringCoeffs c0 = scattering_coeffs(model, 0.0, jost);
    const ScatteringCoeffs ci = scattering_coeffs(model, I, jost);

    suite.check("boundary_finite_support", 1e-8, [&](std::string&) {
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            const auto s = boundary_data(model, MaximalVector::from_finite(random_vector(rng, 10)), c0);
            worst = std::max({worst, std::abs(s.s_plus), std::abs(s.s_minus)});
        }
        return worst;
    });

    suite.check("boundary_of_p_and_q", 1e-6, [&](std::string&) {
        const auto sp = boundary_data(model, MaximalVector::p_solution(I), c0);
        const auto sq = boundary_data(model, MaximalVector::q_solution(I), c0);
        return std::max({rel(sp.s_plus, ci.sigma_plus), rel(sp.s_minus, ci.sigma_minus), rel(sq.s_plus, ci.tau_plus),
                         rel(sq.s_minus, ci.tau_minus)});
    });

    suite.check("boundary_z_independence", 1e-6, [&](std::string&) {
        double worst = 0.0;
        for (int k = 0; k < 3; ++k) {
            const auto u = random_maximal(m, rng);
            const auto a = boundary_data(model, u, c0), b = boundary_data(model, u, ci);
            worst = std::max({worst, rel(a.s_plus, b.s_plus), rel(a.s_minus, b.s_minus)});
        }
        return worst;
    });

    suite.check("green_pairing_p_i", 1e-6, [&](std::string&) {
        const auto u = MaximalVector::p_solution(I);
        const auto g = green_pairing(model, u, u, jost);
        const cplx expected = 2.0 * I * ev.p_norm_squared(I);
        return std::max(std::abs(g.band_limit - expected), std::abs(g.boundary_form - expected)) / std::abs(expected);
    });

    suite.check("green_pairing_random", 1e-6, [&](std::string&) {
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) {
            const auto g = green_pairing(model, random_maximal(m, rng), random_maximal(m, rng), jost);
            worst = std::max(worst, rel(g.boundary_form, g.band_limit));
        }
        return worst;
    });

    suite.check("omega_t_correspondence", 1e-6, [&](std::string& detail) {
        const auto omega = ExtensionParamOmega::make(1.0);
        const auto cal = calibrate_omega(model, omega, I, jost);
        detail = "t* = " + cal.t.to_string();
        const cplx go = gamma_omega(model, 2.0 * I, omega, jost);
        return rel(go, gamma_t(ev.at(2.0 * I), 2.0 * I, cal.t));
    });

    suite.check("mass_cross_check", 1e-6, [&](std::string& detail) {
        ScanOptions scan;
        scan.grid = opts.grid;
        const auto meas = spectral_measure(ev, ExtensionParamT::finite(0), opts.window, scan);
        auto atoms = meas.atoms;
        std::sort(atoms.begin(), atoms.end(),
                  [](const Atom& a, const Atom& b) { return std::abs(a.lambda) < std::abs(b.lambda); });
        double worst = 0.0;
        for (Index k = 0; k < std::min<Index>(3, atoms.size()); ++k) worst = std::max(worst, atoms[k].deviation);
        detail = std::to_string(atoms.size()) + " atoms in window";
        if (atoms.empty()) throw DomainError("no eigenvalues in the window");
        return worst;
    });

    if (opts.moments) {
        suite.check("moment_invariance", 1e-3, [&](std::string&) {
            const auto s = moments(m, 6, 8);
            ScanOptions scan;
            scan.grid = opts.moment_grid;
            const Index wide_N = scan_truncation(model, opts.moment_window, 1e-5);
            const InnerProductEvaluator wide(model, wide_N);
            double worst = 0.0;
            for (const auto& t : {ExtensionParamT::finite(0), ExtensionParamT::finite(1), ExtensionParamT::infinity()}) {
                const auto meas = spectral_measure(wide, t, opts.moment_window, scan);
                for (int n = 0; n <= 6; ++n)
                    worst = std::max(worst, std::abs(meas.moment(n) - s[n]) / std::max(1.0, std::abs(s[n])));
            }
            return worst;
        });
    }
    return results;
}

}  // namespace jlc
