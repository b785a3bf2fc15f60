// Acceptance run: one line per criterion, nonzero exit when any fails.

#include "fixtures.hpp"
#include "jlc/extensions.hpp"
#include "jlc/jost.hpp"
#include "jlc/polynomials.hpp"
#include "jlc/quasiresolvent.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace jlc;

namespace {

constexpr cplx I(0.0, 1.0);
using Clock = std::chrono::steady_clock;

struct Named {
    const char* name;
    const LcModel* model;
};

std::vector<Named> models() { return {{"A", &fixtures::lc_a()}, {"B", &fixtures::lc_b()}, {"C", &fixtures::lc_c()}}; }

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::vector<ExtensionParamT> t_set() {
    return {ExtensionParamT::finite(-2), ExtensionParamT::finite(-1), ExtensionParamT::finite(0),
            ExtensionParamT::finite(1),  ExtensionParamT::finite(2),  ExtensionParamT::infinity()};
}

MaximalVector random_maximal(const CoefficientModel& m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const cplx w(u(rng), 1.0 + u(rng) * 0.5);
    return MaximalVector::resolvent_image(m, w, fixtures::random_vector(rng, 8)) +
           MaximalVector::p_solution(w, cplx(u(rng), u(rng))) + MaximalVector::q_solution(w, cplx(u(rng), u(rng)));
}

int failures = 0;

void report(int id, bool pass, const std::string& detail, double seconds) {
    std::printf("criterion %2d: %s  %s  [%.2f s]\n", id, pass ? "PASS" : "FAIL", detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

void timed(int id, const std::function<std::pair<bool, std::string>()>& body, double limit = 0.0) {
    const auto t0 = Clock::now();
    bool pass = false;
    std::string detail;
    try {
        std::tie(pass, detail) = body();
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit > 0.0 && s >= limit) {
        pass = false;
        detail += fmt("; runtime %.2f s exceeds %.0f s", s, limit);
    }
    report(id, pass, detail, s);
}

}  // namespace

int main() {
    const auto start = Clock::now();
    std::mt19937_64 rng(20240601);
    JostOptions jost;
    jost.tol = 1e-10;

    timed(1, [] {
        double worst = 0.0;
        for (const auto& [name, lc] : models())
            for (cplx z : {cplx(0.0), cplx(1.0), I, 1.0 + I}) {
                const auto t = eval_pq(lc->model(), z, 400);
                for (Index n = 0; n < 400; ++n) worst = std::max(worst, std::abs(wronskian(lc->model(), t.p, t.q, n) - 1.0));
            }
        return std::pair{worst < 1e-10, fmt("max |{p,q}_n - 1| = %.2e (tol 1e-10)", worst)};
    }, 1.0);

    timed(2, [&] {
        double worst_abs = 0.0, worst_scaled = 0.0;
        std::uniform_int_distribution<int> len(1, 100);
        for (const auto& [name, lc] : models())
            for (cplx z : {I, 2.0 * I, 1.0 + I}) {
                const QuasiResolvent r(*lc, z, 400);
                for (int k = 0; k < 20; ++k) {
                    const auto h = fixtures::random_vector(rng, len(rng));
                    if (std::string(name) == "B") worst_scaled = std::max(worst_scaled, r.residual(h, true));
                    else worst_abs = std::max(worst_abs, r.residual(h));
                }
            }
        const bool pass = worst_abs < 1e-8 && worst_scaled < 1e-8;
        return std::pair{pass, fmt("residual A,C %.2e; B (row-scaled) %.2e (tol 1e-8)", worst_abs, worst_scaled)};
    }, 5.0);

    timed(3, [] {
        const auto r = lemma_residuals(fixtures::lc_a(), I, 400);
        const double worst = std::max(r.p_identity, r.q_identity);
        return std::pair{worst < 1e-6, fmt("p residual %.2e, q residual %.2e (tol 1e-6)", r.p_identity, r.q_identity)};
    });

    timed(4, [] {
        double lowest = 1e300, sym = 0.0;
        for (const auto& [name, lc] : models()) {
            const auto up = inner_products(*lc, I), down = inner_products(*lc, -I);
            for (const auto& t : t_set()) {
                const cplx g = gamma_t(up, I, t);
                lowest = std::min(lowest, g.imag());
                sym = std::max(sym, std::abs(gamma_t(down, -I, t) - std::conj(g)));
            }
        }
        return std::pair{lowest > 0.0 && sym < 1e-10, fmt("min Im gamma_t(i) = %.4f; conj symmetry %.2e (tol 1e-10)", lowest, sym)};
    });

    timed(5, [] {
        const auto& lc = fixtures::lc_a();
        const auto meas = spectral_measure(lc, ExtensionParamT::finite(0), {-20.0, 20.0});
        double resid = 0.0;
        for (const auto& a : meas.atoms) resid = std::max(resid, a.residual);
        auto atoms = meas.atoms;
        std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return std::abs(a.lambda) < std::abs(b.lambda); });
        double dev = atoms.size() >= 3 ? 0.0 : 1.0;
        for (Index k = 0; k < std::min<Index>(3, atoms.size()); ++k) dev = std::max(dev, atoms[k].deviation);
        const double st = std::abs(meas.stieltjes(I) - gamma_t(lc, I, ExtensionParamT::finite(0)));
        const bool pass = resid < 1e-8 && dev < 1e-6 && st < 1e-3;
        return std::pair{pass, fmt("max |D_0| %.2e; mass deviation %.2e; |stieltjes - gamma_0(i)| %.2e", resid, dev, st)};
    });

    timed(6, [] {
        const auto& lc = fixtures::lc_a();
        const auto s = moments(lc.model(), 6, 400);
        const Window wide{-200.0, 200.0};
        ScanOptions scan;
        scan.grid = 0.25;
        scan.N = scan_truncation(lc, wide, 1e-5);
        const InnerProductEvaluator ev(lc, scan.N);
        double worst = 0.0;
        std::vector<std::vector<double>> spectra;
        for (const auto& t : {ExtensionParamT::finite(0), ExtensionParamT::finite(1), ExtensionParamT::infinity()}) {
            const auto meas = spectral_measure(ev, t, wide, scan);
            for (int n = 0; n <= 6; ++n) worst = std::max(worst, std::abs(meas.moment(n) - s[n]) / std::max(1.0, std::abs(s[n])));
            std::vector<double> l;
            for (const auto& a : meas.atoms) l.push_back(a.lambda);
            spectra.push_back(l);
        }
        double separation = 1e300;
        for (Index i = 0; i < 3; ++i)
            for (Index j = i + 1; j < 3; ++j) {
                double d = spectra[i].size() == spectra[j].size() ? 0.0 : 1.0;
                for (Index k = 0; k < std::min(spectra[i].size(), spectra[j].size()); ++k)
                    d = std::max(d, std::abs(spectra[i][k] - spectra[j][k]));
                separation = std::min(separation, d);
            }
        return std::pair{worst < 1e-3 && separation > 1e-3,
                         fmt("moment error %.2e (tol 1e-3); smallest atom difference between measures %.3f", worst, separation)};
    });

    timed(7, [&] {
        double wr = 0.0, det = 0.0, mod = 0.0;
        for (const auto& [name, lc] : models()) {
            for (cplx z : {cplx(0.0), I, 1.0 + I}) wr = std::max(wr, jost_solutions(*lc, z, jost).wronskian_deviation);
            const auto c = scattering_coeffs(*lc, I, jost);
            det = std::max(det, c.identity_residual);
            const InnerProductEvaluator ev(*lc, choose_truncation(*lc, std::vector<cplx>{I}));
            const double rhs = ev.p_norm_squared(I) / lc->asymptotics().boundary_scale();
            mod = std::max(mod, std::abs(std::norm(c.sigma_plus) - std::norm(c.sigma_minus) - rhs) / rhs);
        }
        return std::pair{wr < 1e-6 && det < 1e-6 && mod < 1e-6,
                         fmt("Jost Wronskian %.2e; determinant %.2e; modulus %.2e (tol 1e-6)", wr, det, mod)};
    });

    timed(8, [&] {
        double fin = 0.0, pq = 0.0, zi = 0.0;
        for (const auto& [name, lc] : models()) {
            const auto c0 = scattering_coeffs(*lc, 0.0, jost), ci = scattering_coeffs(*lc, I, jost);
            for (int k = 0; k < 5; ++k) {
                const auto s = boundary_data(*lc, MaximalVector::from_finite(fixtures::random_vector(rng, 12)), c0);
                fin = std::max({fin, std::abs(s.s_plus), std::abs(s.s_minus)});
            }
            const auto sp = boundary_data(*lc, MaximalVector::p_solution(I), c0);
            const auto sq = boundary_data(*lc, MaximalVector::q_solution(I), c0);
            pq = std::max({pq, rel(sp.s_plus, ci.sigma_plus), rel(sp.s_minus, ci.sigma_minus), rel(sq.s_plus, ci.tau_plus),
                           rel(sq.s_minus, ci.tau_minus)});
            for (int k = 0; k < 5; ++k) {
                const auto u = random_maximal(lc->model(), rng);
                const auto a = boundary_data(*lc, u, c0), b = boundary_data(*lc, u, ci);
                zi = std::max({zi, rel(a.s_plus, b.s_plus), rel(a.s_minus, b.s_minus)});
            }
        }
        return std::pair{fin < 1e-8 && pq < 1e-6 && zi < 1e-6,
                         fmt("finite support %.2e (tol 1e-8); p,q vs sigma,tau %.2e; z=0 vs z=i %.2e (tol 1e-6)", fin, pq, zi)};
    });

    timed(9, [&] {
        const auto& lc = fixtures::lc_a();
        const Window w{-20.0, 20.0};
        double gam = 0.0, spec = 0.0;
        bool counts = true;
        for (cplx om : {cplx(1.0), I, cplx(-1.0)}) {
            const auto omega = ExtensionParamOmega::make(om);
            const auto cal = calibrate_omega(lc, omega, I, jost);
            gam = std::max(gam, std::abs(gamma_omega(lc, 2.0 * I, omega, jost) - gamma_t(lc, 2.0 * I, cal.t)));
            const auto se = omega_eigenvalues(lc, omega, w, {}, jost).eigenvalues;
            const auto st = eigenvalues(lc, cal.t, w).eigenvalues;
            counts = counts && se.size() == st.size() && !se.empty();
            for (Index k = 0; k < std::min(se.size(), st.size()); ++k) spec = std::max(spec, std::abs(se[k] - st[k]));
        }
        return std::pair{counts && gam < 1e-6 && spec < 1e-6,
                         fmt("|gamma_omega(2i) - gamma_t*(2i)| %.2e; atom mismatch %.2e (tol 1e-6)", gam, spec) +
                             (counts ? "" : "; atom counts differ")};
    });

    timed(10, [&] {
        double worst = 0.0, self = 0.0;
        for (const auto& [name, lc] : models()) {
            for (int k = 0; k < 10; ++k) {
                const auto g = green_pairing(*lc, random_maximal(lc->model(), rng), random_maximal(lc->model(), rng), jost);
                worst = std::max(worst, rel(g.boundary_form, g.band_limit));
            }
            const auto p = MaximalVector::p_solution(I);
            const auto g = green_pairing(*lc, p, p, jost);
            const InnerProductEvaluator ev(*lc, choose_truncation(*lc, std::vector<cplx>{I}));
            const cplx expect = 2.0 * I * ev.p_norm_squared(I);
            self = std::max({self, std::abs(g.band_limit - expect) / std::abs(expect),
                             std::abs(g.boundary_form - expect) / std::abs(expect)});
        }
        const double total = std::chrono::duration<double>(Clock::now() - start).count();
        return std::pair{worst < 1e-6 && self < 1e-6 && total < 60.0,
                         fmt("band vs boundary %.2e; <p(i),p(i)> pairing %.2e (tol 1e-6); suite %.1f s (limit 60 s)", worst,
                             self, total)};
    });

    std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
