#include "jlc/jost.hpp"

#include "jlc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace jlc {

namespace {

inline bool finite(const cplx& x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); }

/// sum_{m>M} t_m from the last term, assuming t_m ~ C m^{-s}.
double power_remainder(double t_half, double t_last, Index half, Index last) {
    if (t_last == 0.0 || t_half == 0.0 || std::signbit(t_half) != std::signbit(t_last)) return 0.0;
    const double ratio = t_half / t_last;
    if (!(ratio > 1.0)) return 0.0;
    const double s = std::log(ratio) / std::log(static_cast<double>(last) / static_cast<double>(half));
    if (s <= 1.01) return 0.0;
    const double M = static_cast<double>(last);
    return t_last * std::pow(M / (M + 0.5), s) * (M + 0.5) / (s - 1.0);
}

Index default_pairing_truncation(const LcModel& model) {
    return std::min<Index>(8192, model.model().usable_limit() - 2);
}

}  // namespace

cplx jost_wronskian_target(const LcModel& model) {
    return cplx(0.0, -2.0) * model.asymptotics().boundary_scale();
}

Index default_jost_start(const LcModel& model, double tol) {
    const auto& m = model.model();
    const Index cap = std::max<Index>(16, (m.usable_limit() - 2) / 16);
    Index n = std::min<Index>(256, cap);
    while (2 * n <= cap) {
        const double r = m.regularity_tail(n);
        if (r * r <= tol) break;
        n *= 2;
    }
    return n;
}

JostSolver::JostSolver(const LcModel& model, Index n_start) : model_(model), n_start_(n_start) {
    const auto& m = model.model();
    if (n_start < 8) throw DomainError("Jost initialization index must be at least 8");
    if (n_start + 2 >= m.usable_limit())
        throw DomainError("Jost initialization index " + std::to_string(n_start) +
                          " exceeds the model's usable range");
    const auto asym = model.asymptotics();
    if (!(std::abs(asym.beta_inf) < 1.0)) throw DomainError("Jost solutions require |beta_inf| < 1");
    coeffs_ = m.table(n_start + 1);
    theta_ = std::acos(asym.beta_inf);

    // Seed tail sums over m > n_start + 1, then step down one index.
    const Index first = n_start + 2;
    const Index last = std::min<Index>(first + 16 * n_start, m.usable_limit() - 2);
    const Index half = first + (last - first) / 2;
    double e_sum = 0.0, k_sum = 0.0, e_half = 0.0, k_half = 0.0, e_last = 0.0, k_last = 0.0;
    double a_prev = m.a(first - 1), a_cur = m.a(first);
    for (Index j = first; j <= last; ++j) {
        const double a_next = m.a(j + 1);
        const double e = 1.0 / (std::sqrt(a_prev) * std::sqrt(a_cur));
        const double k = a_cur / (std::sqrt(a_prev) * std::sqrt(a_next)) - 1.0;
        e_sum += e;
        k_sum += k;
        if (j == half) e_half = e, k_half = k;
        e_last = e;
        k_last = k;
        a_prev = a_cur;
        a_cur = a_next;
    }
    if (!m.max_index()) {
        e_sum += power_remainder(e_half, e_last, half, last);
        k_sum += power_remainder(k_half, k_last, half, last);
    }
    const double a0 = m.a(n_start), a1 = m.a(n_start + 1), a2 = m.a(n_start + 2);
    e_tail_[1] = e_sum;
    k_tail_[1] = k_sum;
    e_tail_[0] = e_sum + 1.0 / (std::sqrt(a1) * std::sqrt(a0));
    k_tail_[0] = k_sum + (a1 / (std::sqrt(a0) * std::sqrt(a2)) - 1.0);
}

JostData JostSolver::solve(cplx z) const {
    const Index N = n_start_;
    const auto& m = model_.model();
    JostData d;
    d.z = z;
    d.n_start = N;
    d.f_plus.assign(N + 2, 0.0);
    d.f_minus.assign(N + 2, 0.0);
    const cplx e_plus = std::polar(1.0, theta_);
    const cplx two_i_sin(0.0, 2.0 * std::sin(theta_));
    for (int j = 0; j < 2; ++j) {
        const Index n = N + j;
        const double amp = 1.0 / std::sqrt(coeffs_.a[n]);
        const double phi = m.phi(n);
        const cplx corr_plus = std::exp(-(z * e_tail_[j] - e_plus * k_tail_[j]) / two_i_sin);
        const cplx corr_minus = std::exp((z * e_tail_[j] - std::conj(e_plus) * k_tail_[j]) / two_i_sin);
        d.f_plus[n] = amp * std::polar(1.0, phi) * corr_plus;
        d.f_minus[n] = amp * std::polar(1.0, -phi) * corr_minus;
    }
    for (Index n = N; n >= 1; --n) {
        const cplx shift = z - coeffs_.b[n];
        const double an = coeffs_.a[n], inv = 1.0 / coeffs_.a[n - 1];
        d.f_plus[n - 1] = (shift * d.f_plus[n] - an * d.f_plus[n + 1]) * inv;
        d.f_minus[n - 1] = (shift * d.f_minus[n] - an * d.f_minus[n + 1]) * inv;
        if (!finite(d.f_plus[n - 1]) || !finite(d.f_minus[n - 1]))
            throw OverflowError("Jost backward recurrence overflowed", n - 1);
    }
    const cplx target = jost_wronskian_target(model_);
    for (Index n = 0; n <= N; ++n) {
        const cplx w = coeffs_.a[n] * (d.f_plus[n] * d.f_minus[n + 1] - d.f_plus[n + 1] * d.f_minus[n]);
        d.wronskian_deviation = std::max(d.wronskian_deviation, std::abs(w - target) / std::abs(target));
    }
    return d;
}

JostData jost_solutions(const LcModel& model, cplx z, const JostOptions& opts) {
    const Index limit = model.model().usable_limit();
    Index n = opts.n_start ? opts.n_start : default_jost_start(model, opts.tol);
    double achieved = 0.0;
    for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
        JostData d = JostSolver(model, n).solve(z);
        d.retries = attempt;
        if (d.wronskian_deviation <= opts.tol) return d;
        achieved = d.wronskian_deviation;
        if (2 * n + 2 >= limit) break;
        n *= 2;
    }
    std::ostringstream msg;
    msg << "Jost solutions did not reach Wronskian deviation " << opts.tol << " (achieved " << achieved
        << ", last N_start " << n << ")";
    throw ConvergenceError(msg.str(), achieved);
}

Band interior_band(Index n_start) { return {n_start / 4, n_start / 2}; }

ScatteringCoeffs scattering_coeffs(const LcModel& model, const JostData& jost, const PolyTable& table,
                                   double spread_tol) {
    const Band band = interior_band(jost.n_start);
    if (table.N < band.hi + 1)
        throw DomainError("scattering_coeffs: polynomial table must reach index " + std::to_string(band.hi + 1));
    const auto& m = model.model();
    const std::span<const cplx> p(table.p), q(table.q), fp(jost.f_plus), fm(jost.f_minus);
    cplx sums[4] = {};
    const double count = static_cast<double>(band.hi - band.lo + 1);
    for (Index n = band.lo; n <= band.hi; ++n) {
        sums[0] += wronskian(m, p, fm, n);
        sums[1] += wronskian(m, p, fp, n);
        sums[2] += wronskian(m, q, fm, n);
        sums[3] += wronskian(m, q, fp, n);
    }
    cplx mean[4];
    for (int i = 0; i < 4; ++i) mean[i] = sums[i] / count;
    double spread = 0.0;
    for (Index n = band.lo; n <= band.hi; ++n) {
        const cplx w[4] = {wronskian(m, p, fm, n), wronskian(m, p, fp, n), wronskian(m, q, fm, n),
                           wronskian(m, q, fp, n)};
        for (int i = 0; i < 4; ++i)
            spread = std::max(spread, std::abs(w[i] - mean[i]) / std::max(std::abs(mean[i]), 1e-300));
    }
    const cplx target = jost_wronskian_target(model);  // {f+, f-}
    ScatteringCoeffs c;
    c.z = jost.z;
    c.sigma_plus = mean[0] / target;
    c.sigma_minus = -mean[1] / target;
    c.tau_plus = mean[2] / target;
    c.tau_minus = -mean[3] / target;
    c.identity_residual = std::abs((c.sigma_plus * c.tau_minus - c.sigma_minus * c.tau_plus) * target - 1.0);
    c.band_spread = spread;
    if (spread > spread_tol) {
        std::ostringstream msg;
        msg << "Wronskians vary by " << spread << " over the band [" << band.lo << ", " << band.hi << "]";
        throw ConvergenceError(msg.str(), spread);
    }
    return c;
}

ScatteringCoeffs scattering_coeffs(const LcModel& model, cplx z, const JostOptions& opts) {
    const JostData jost = jost_solutions(model, z, opts);
    const PolyTable table = eval_pq(model.model(), z, interior_band(jost.n_start).hi + 1);
    return scattering_coeffs(model, jost, table);
}

ScatteringCoeffs scattering_coeffs(const JostSolver& solver, cplx z) {
    const JostData jost = solver.solve(z);
    const Band band = interior_band(jost.n_start);
    const auto& c = solver.coefficients();
    std::vector<cplx> p(band.hi + 2), q(band.hi + 2);
    eval_pq_into<cplx>(c, z, p, q);
    const auto& fp = jost.f_plus;
    const auto& fm = jost.f_minus;
    cplx sums[4] = {};
    for (Index n = band.lo; n <= band.hi; ++n) {
        const double a = c.a[n];
        sums[0] += a * (p[n] * fm[n + 1] - p[n + 1] * fm[n]);
        sums[1] += a * (p[n] * fp[n + 1] - p[n + 1] * fp[n]);
        sums[2] += a * (q[n] * fm[n + 1] - q[n + 1] * fm[n]);
        sums[3] += a * (q[n] * fp[n + 1] - q[n + 1] * fp[n]);
    }
    const double count = static_cast<double>(band.hi - band.lo + 1);
    const cplx target = jost_wronskian_target(solver.model()) * count;
    ScatteringCoeffs out;
    out.z = z;
    out.sigma_plus = sums[0] / target;
    out.sigma_minus = -sums[1] / target;
    out.tau_plus = sums[2] / target;
    out.tau_minus = -sums[3] / target;
    out.identity_residual =
        std::abs((out.sigma_plus * out.tau_minus - out.sigma_minus * out.tau_plus) * (target / count) - 1.0);
    return out;
}

BoundaryData boundary_data(const LcModel& model, const MaximalVector& u, const ScatteringCoeffs& at_z, Index L) {
    if (L == 0) L = default_pairing_truncation(model);
    const auto& m = model.model();
    const cplx z = at_z.z;
    const cplx gamma = gamma_coefficient(m, u, z, L);
    const cplx hp = pair_with_p(m, u.shifted(m, z), std::conj(z), L);
    return {gamma * at_z.sigma_plus + hp * at_z.tau_plus, gamma * at_z.sigma_minus + hp * at_z.tau_minus};
}

BoundaryData boundary_data(const LcModel& model, const MaximalVector& u, cplx z, const JostOptions& opts,
                           Index L) {
    return boundary_data(model, u, scattering_coeffs(model, z, opts), L);
}

ExtensionParamOmega ExtensionParamOmega::make(cplx omega) {
    if (!(std::abs(std::abs(omega) - 1.0) <= 1e-12))
        throw DomainError("extension parameter omega must satisfy |omega| = 1");
    return ExtensionParamOmega(omega);
}

ExtensionParamOmega ExtensionParamOmega::from_angle(double chi) {
    return ExtensionParamOmega(std::polar(1.0, chi));
}

cplx gamma_omega(const ScatteringCoeffs& c, const ExtensionParamOmega& omega) {
    const cplx w = omega.value();
    const cplx den = c.sigma_plus - w * c.sigma_minus;
    const double scale = std::max({std::abs(c.sigma_plus), std::abs(c.sigma_minus), 1e-300});
    if (std::abs(den) <= 1e-14 * scale)
        throw SpectralPointError("gamma_omega: z is (numerically) an eigenvalue of J_omega", den);
    return -(c.tau_plus - w * c.tau_minus) / den;
}

cplx gamma_omega(const LcModel& model, cplx z, const ExtensionParamOmega& omega, const JostOptions& opts) {
    return gamma_omega(scattering_coeffs(model, z, opts), omega);
}

Spectrum omega_eigenvalues(const LcModel& model, const ExtensionParamOmega& omega, const Window& window,
                           const ScanOptions& scan, const JostOptions& jost, double verify_tol) {
    if (!(window.hi > window.lo)) throw DomainError("eigenvalue window must satisfy lo < hi");
    const Index n_start = jost_solutions(model, 0.0, jost).n_start;
    const JostSolver solver(model, n_start);
    const cplx half_turn = std::polar(1.0, -0.5 * omega.angle());
    auto f = [&](double x) { return (half_turn * scattering_coeffs(solver, x).sigma_plus).imag(); };
    auto roots = scan_roots(f, window.lo, window.hi, scan.grid, scan.root_tol, scan.exec);
    Spectrum s;
    s.eigenvalues = std::move(roots.roots);
    s.warnings = std::move(roots.warnings);
    s.N_used = n_start;
    for (double x : s.eigenvalues) {
        const auto c = scattering_coeffs(solver, x);
        const double r = std::abs(c.sigma_plus - omega.value() * c.sigma_minus) /
                         std::max(std::abs(c.sigma_plus), 1e-300);
        if (r > verify_tol) {
            std::ostringstream msg;
            msg << "root " << x << " fails |sigma_+ - omega sigma_-| check (" << r << ")";
            s.warnings.push_back(msg.str());
        }
    }
    return s;
}

Calibration calibrate_omega(const LcModel& model, const ExtensionParamOmega& omega, cplx z,
                            const JostOptions& opts, double tol) {
    TruncationOptions t;
    t.tol = tol;
    return calibrate_t(inner_products(model, z, t), z, gamma_omega(model, z, omega, opts));
}

GreenPairing green_pairing(const LcModel& model, const MaximalVector& u, const MaximalVector& v,
                           const JostOptions& opts, Index L, double spread_tol) {
    if (L == 0) L = default_pairing_truncation(model);
    const auto& m = model.model();
    const Band band = interior_band(L);
    const Index floor_index = std::max(u.support_end(), v.support_end()) + 1;
    if (band.lo <= floor_index)
        throw DomainError("green_pairing: truncation too short for the finite parts");
    const auto uu = u.values(m, band.hi + 1);
    const auto vv = v.values(m, band.hi + 1);
    const cplx shift = (u.is_finite() || v.is_finite()) ? cplx(0.0) : u.w - std::conj(v.w);
    constexpr int samples = 16;
    std::vector<cplx> values;
    for (int s = 0; s < samples; ++s) {
        const Index n = band.lo + (band.hi - band.lo) * s / (samples - 1);
        cplx w = m.a(n) * (uu[n + 1] * std::conj(vv[n]) - uu[n] * std::conj(vv[n + 1]));
        if (shift != cplx(0.0)) {
            const auto fu = fit_amplitudes<cplx>(m, uu, n);
            const auto fv = fit_amplitudes<cplx>(m, vv, n);
            w += shift * asymptotic_tail(m, fu, fv, n);
        }
        values.push_back(w);
    }
    GreenPairing g;
    for (const cplx& w : values) g.band_limit += w;
    g.band_limit /= static_cast<double>(samples);
    for (const cplx& w : values)
        g.band_spread = std::max(g.band_spread, std::abs(w - g.band_limit) / std::max(1.0, std::abs(g.band_limit)));
    if (g.band_spread > spread_tol) {
        std::ostringstream msg;
        msg << "Green pairing band values vary by " << g.band_spread;
        throw ConvergenceError(msg.str(), g.band_spread);
    }
    const ScatteringCoeffs c0 = scattering_coeffs(model, 0.0, opts);
    const BoundaryData su = boundary_data(model, u, c0, L);
    const BoundaryData sv = boundary_data(model, v, c0, L);
    g.boundary_form = cplx(0.0, 2.0) * model.asymptotics().boundary_scale() *
                      (su.s_plus * std::conj(sv.s_plus) - su.s_minus * std::conj(sv.s_minus));
    return g;
}

}  // namespace jlc
