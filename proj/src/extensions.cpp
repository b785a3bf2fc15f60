#include "jlc/extensions.hpp"

#include "jlc/error.hpp"
#include "jlc/quasiresolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace jlc {

namespace {

constexpr double kSpectralEps = 1e-14;

double scale_of(std::initializer_list<cplx> terms) {
    double s = 0.0;
    for (const cplx& v : terms) s = std::max(s, std::abs(v));
    return std::max(s, 1.0);
}

}  // namespace

ExtensionParamT ExtensionParamT::finite(double t) {
    if (!std::isfinite(t)) throw DomainError("extension parameter t must be finite or explicitly infinite");
    return ExtensionParamT(t);
}

double ExtensionParamT::value() const {
    if (is_infinite()) throw DomainError("t = inf has no finite value");
    return std::get<double>(value_);
}

std::string ExtensionParamT::to_string() const {
    if (is_infinite()) return "inf";
    std::ostringstream s;
    s.precision(17);
    s << std::get<double>(value_);
    return s.str();
}

NevanlinnaPair nevanlinna(const InnerProducts& ip, cplx z, const ExtensionParamT& t) {
    if (t.is_infinite()) return {-(1.0 + z * ip.qp0), z * ip.pp0};
    const double tv = t.value();
    return {z * ip.qq0 + (1.0 + z * ip.qp0) * tv, 1.0 - z * ip.pq0 - z * ip.pp0 * tv};
}

NevanlinnaReal nevanlinna(const InnerProductEvaluator::Real& ip, double lambda, const ExtensionParamT& t) {
    if (t.is_infinite()) return {-(1.0 + lambda * ip.qp0), lambda * ip.pp0};
    const double tv = t.value();
    return {lambda * ip.qq0 + (1.0 + lambda * ip.qp0) * tv, 1.0 - lambda * ip.pq0 - lambda * ip.pp0 * tv};
}

cplx gamma_t(const InnerProducts& ip, cplx z, const ExtensionParamT& t) {
    const auto [num, den] = nevanlinna(ip, z, t);
    const double scale = t.is_infinite()
                             ? scale_of({z * ip.pp0})
                             : scale_of({z * ip.pq0, z * ip.pp0 * t.value()});
    if (std::abs(den) <= kSpectralEps * scale)
        throw SpectralPointError("gamma_t: z is (numerically) an eigenvalue of J_" + t.to_string(), den);
    return num / den;
}

cplx gamma_t(const LcModel& model, cplx z, const ExtensionParamT& t, double tol) {
    TruncationOptions opts;
    opts.tol = tol;
    return gamma_t(inner_products(model, z, opts), z, t);
}

std::vector<cplx> resolvent_apply(const LcModel& model, cplx z, const ExtensionParamT& t,
                                  std::span<const cplx> h, Index N, double tol) {
    const QuasiResolvent r(model, z, N);
    auto out = r.apply(h);
    cplx pairing = 0.0;  // <h, p(conj z)> = sum h_m p_m(z)
    for (Index m = 0; m < h.size(); ++m) pairing += h[m] * r.table().p[m];
    if (pairing == cplx(0.0)) return out;
    const cplx g = gamma_t(model, z, t, tol);
    for (Index n = 0; n <= N; ++n) out[n] += g * pairing * r.table().p[n];
    return out;
}

Index scan_truncation(const LcModel& model, const Window& window, double tol) {
    TruncationOptions opts;
    opts.tol = tol;
    const cplx probes[] = {cplx(0.0, 1.0), cplx(window.lo, 1.0), cplx(window.hi, 1.0)};
    return choose_truncation(model, probes, opts);
}

double spectral_denominator(const InnerProductEvaluator& ev, double lambda, const ExtensionParamT& t) {
    return nevanlinna(ev.at_real(lambda), lambda, t).denominator;
}

Spectrum eigenvalues(const InnerProductEvaluator& ev, const ExtensionParamT& t, const Window& window,
                     const ScanOptions& opts) {
    if (!(window.hi > window.lo)) throw DomainError("eigenvalue window must satisfy lo < hi");
    auto scan = scan_roots([&](double x) { return spectral_denominator(ev, x, t); }, window.lo, window.hi,
                           opts.grid, opts.root_tol, opts.exec);
    Spectrum s;
    s.eigenvalues = std::move(scan.roots);
    s.warnings = std::move(scan.warnings);
    s.N_used = ev.N();
    return s;
}

Spectrum eigenvalues(const LcModel& model, const ExtensionParamT& t, const Window& window,
                     const ScanOptions& opts) {
    const Index N = opts.N ? opts.N : scan_truncation(model, window, opts.tol);
    return eigenvalues(InnerProductEvaluator(model, N), t, window, opts);
}

double SpectralMeasure::total_mass() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.mass;
    return s;
}

double SpectralMeasure::moment(int n) const {
    double s = 0.0;
    for (const auto& a : atoms) s += std::pow(a.lambda, n) * a.mass;
    return s;
}

cplx SpectralMeasure::stieltjes(cplx z) const {
    cplx s = 0.0;
    for (const auto& a : atoms) s += a.mass / (a.lambda - z);
    return s;
}

SpectralMeasure spectral_measure(const InnerProductEvaluator& ev, const ExtensionParamT& t,
                                 const Window& window, const ScanOptions& opts, double mass_tol) {
    const Spectrum spec = eigenvalues(ev, t, window, opts);
    SpectralMeasure m;
    m.t = t;
    m.window = window;
    m.warnings = spec.warnings;
    m.N_used = ev.N();
    m.atoms.resize(spec.eigenvalues.size());
    const auto count = static_cast<std::ptrdiff_t>(spec.eigenvalues.size());
    auto D = [&](double x) { return spectral_denominator(ev, x, t); };
#pragma omp parallel for schedule(dynamic, 1) if (opts.exec == Execution::parallel)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        const double lambda = spec.eigenvalues[k];
        Atom a;
        a.lambda = lambda;
        a.mass = 1.0 / ev.p_norm_squared(lambda);
        const auto nd = nevanlinna(ev.at_real(lambda), lambda, t);
        a.residual = std::abs(nd.denominator);
        const double h = 1e-3 * std::max(1.0, std::abs(lambda));
        const double dD = (D(lambda - 2 * h) - 8 * D(lambda - h) + 8 * D(lambda + h) - D(lambda + 2 * h)) / (12 * h);
        a.residue_mass = -nd.numerator / dD;
        a.deviation = std::abs(a.mass - a.residue_mass) / a.mass;
        a.flagged = a.deviation > mass_tol;
        m.atoms[k] = a;
    }
    for (const auto& a : m.atoms)
        if (a.flagged) {
            std::ostringstream msg;
            msg << "atom at " << a.lambda << ": eigenvector and residue masses differ by " << a.deviation;
            m.warnings.push_back(msg.str());
        }
    return m;
}

SpectralMeasure spectral_measure(const LcModel& model, const ExtensionParamT& t, const Window& window,
                                 const ScanOptions& opts, double mass_tol) {
    const Index N = opts.N ? opts.N : scan_truncation(model, window, opts.tol);
    return spectral_measure(InnerProductEvaluator(model, N), t, window, opts, mass_tol);
}

std::vector<double> moments(const CoefficientModel& model, int n_max, Index N) {
    if (n_max < 0) throw DomainError("moments: n_max must be non-negative");
    if (N < static_cast<Index>(n_max) / 2 + 1)
        throw DomainError("moments: truncation N = " + std::to_string(N) + " contaminates s_" +
                          std::to_string(n_max) + "; use N >= " + std::to_string(n_max / 2 + 1));
    // Only indices up to n_max/2 influence (J^n e_0)_0 for n <= n_max.
    const Index size = std::min<Index>(N, static_cast<Index>(n_max) / 2 + 2);
    const auto c = model.table(size);
    std::vector<double> v(size, 0.0), w(size);
    v[0] = 1.0;
    std::vector<double> s(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        s[n] = v[0];
        for (Index i = 0; i < size; ++i) {
            double x = c.b[i] * v[i];
            if (i > 0) x += c.a[i - 1] * v[i - 1];
            if (i + 1 < size) x += c.a[i] * v[i + 1];
            w[i] = x;
        }
        std::swap(v, w);
    }
    return s;
}

Calibration calibrate_t(const InnerProducts& ip, cplx z, cplx gamma) {
    // gamma (1 - z pq0 - z pp0 t) = z qq0 + (1 + z qp0) t
    const cplx num = gamma * (1.0 - z * ip.pq0) - z * ip.qq0;
    const cplx den = 1.0 + z * ip.qp0 + gamma * z * ip.pp0;
    Calibration c;
    if (std::abs(den) <= 1e-12 * std::abs(num)) {
        c.t = ExtensionParamT::infinity();
        return c;
    }
    const cplx t = num / den;
    c.t = ExtensionParamT::finite(t.real());
    c.imag_residual = std::abs(t.imag());
    return c;
}

}  // namespace jlc
