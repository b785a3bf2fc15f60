#include "jlc/polynomials.hpp"

#include "jlc/error.hpp"

#include <algorithm>
#include <cmath>

namespace jlc {

namespace {

inline bool finite(double x) { return std::isfinite(x); }
inline bool finite(const cplx& x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); }

inline double conj_of(double x) { return x; }
inline cplx conj_of(const cplx& x) { return std::conj(x); }

inline double abs2(double x) { return x * x; }
inline double abs2(const cplx& x) { return std::norm(x); }

template <class U, class V>
cplx dot_impl(const CoefficientModel& model, std::span<const U> u, std::span<const V> v, Index L) {
    if (L < 1 || u.size() <= L || v.size() <= L)
        throw DomainError("tail-corrected sum needs values through index " + std::to_string(L));
    cplx head = 0.0;
    for (Index n = 0; n <= L; ++n) head += cplx(u[n]) * cplx(conj_of(v[n]));
    const auto fu = fit_amplitudes<U>(model, u, L);
    const auto fv = fit_amplitudes<V>(model, v, L);
    return head + asymptotic_tail(model, fu, fv, L);
}

/// Corrected sums at N/4, N/2 and N combined by Richardson extrapolation; the
/// error exponent is estimated from the three levels and clamped to [1, 8].
template <class U, class V>
cplx extrapolated_dot(const CoefficientModel& model, std::span<const U> u, std::span<const V> v, Index N) {
    if (N < 64) return dot_impl<U, V>(model, u, v, N);
    const Index levels[3] = {N / 4, N / 2, N};
    cplx values[3];
    cplx head = 0.0;
    Index n = 0;
    for (int k = 0; k < 3; ++k) {
        const Index L = levels[k];
        for (; n <= L; ++n) head += cplx(u[n]) * cplx(conj_of(v[n]));
        values[k] = head + asymptotic_tail(model, fit_amplitudes<U>(model, u, L), fit_amplitudes<V>(model, v, L), L);
    }
    const double d1 = std::abs(values[1] - values[0]), d2 = std::abs(values[2] - values[1]);
    const double s = d1 > 0.0 && d2 > 0.0 ? std::clamp(std::log2(d1 / d2), 1.0, 8.0) : 8.0;
    return values[2] + (values[2] - values[1]) / (std::exp2(s) - 1.0);
}

}  // namespace

template <class T>
void eval_pq_into(const CoefficientModel::Table& c, T z, std::span<T> p, std::span<T> q) {
    const Index size = p.size();
    if (size < 2 || q.size() != size || c.size() + 1 < size)
        throw DomainError("eval_pq_into: inconsistent buffer sizes");
    p[0] = T(1.0);
    q[0] = T(0.0);
    p[1] = (z - c.b[0]) / c.a[0];
    q[1] = T(1.0) / c.a[0];
    for (Index n = 1; n + 1 < size; ++n) {
        const T shift = z - c.b[n];
        const double inv = 1.0 / c.a[n];
        p[n + 1] = (shift * p[n] - c.a[n - 1] * p[n - 1]) * inv;
        q[n + 1] = (shift * q[n] - c.a[n - 1] * q[n - 1]) * inv;
        if (!finite(p[n + 1]) || !finite(q[n + 1]))
            throw OverflowError("polynomial recurrence overflowed", n + 1);
    }
}

template void eval_pq_into<double>(const CoefficientModel::Table&, double, std::span<double>,
                                   std::span<double>);
template void eval_pq_into<cplx>(const CoefficientModel::Table&, cplx, std::span<cplx>,
                                 std::span<cplx>);

PolyTable eval_pq(const CoefficientModel& model, cplx z, Index N) {
    if (N < 2) throw DomainError("eval_pq requires N >= 2");
    const auto coeffs = model.table(N);
    PolyTable t;
    t.z = z;
    t.N = N;
    t.p.resize(N + 1);
    t.q.resize(N + 1);
    eval_pq_into<cplx>(coeffs, z, t.p, t.q);
    const Index tail_len = (N + 9) / 10;
    double total = 0.0, tail = 0.0;
    for (Index n = 0; n <= N; ++n) {
        const double w = std::norm(t.p[n]) + std::norm(t.q[n]);
        total += w;
        if (n + tail_len > N) tail += w;
    }
    t.tail_indicator = total > 0.0 ? tail / total : 0.0;
    return t;
}

cplx wronskian(const CoefficientModel& model, std::span<const cplx> u, std::span<const cplx> v,
               Index n) {
    if (u.size() <= n + 1 || v.size() <= n + 1)
        throw DomainError("wronskian: sequences must extend to index " + std::to_string(n + 1));
    return model.a(n) * (u[n] * v[n + 1] - u[n + 1] * v[n]);
}

std::vector<cplx> rescaled(const CoefficientModel& model, std::span<const cplx> u) {
    std::vector<cplx> out(u.size());
    for (Index n = 0; n < u.size(); ++n) out[n] = std::sqrt(model.a(n)) * u[n];
    return out;
}

template <class T>
AsymptoticAmplitudes fit_amplitudes(const CoefficientModel& model, std::span<const T> u, Index L) {
    if (L < 1 || u.size() <= L) throw DomainError("fit_amplitudes: index out of range");
    const cplx e0 = std::polar(1.0, model.phi(L - 1));
    const cplx e1 = std::polar(1.0, model.phi(L));
    const cplx r0 = std::sqrt(model.a(L - 1)) * cplx(u[L - 1]);
    const cplx r1 = std::sqrt(model.a(L)) * cplx(u[L]);
    // [e0 conj(e0); e1 conj(e1)] [plus; minus] = [r0; r1]
    const cplx det = e0 * std::conj(e1) - std::conj(e0) * e1;
    if (std::abs(det) < 1e-12)
        throw DomainError("fit_amplitudes: phase increment vanishes at index " + std::to_string(L));
    return {(r0 * std::conj(e1) - std::conj(e0) * r1) / det, (e0 * r1 - e1 * r0) / det};
}

template AsymptoticAmplitudes fit_amplitudes<double>(const CoefficientModel&, std::span<const double>,
                                                     Index);
template AsymptoticAmplitudes fit_amplitudes<cplx>(const CoefficientModel&, std::span<const cplx>,
                                                   Index);

cplx asymptotic_tail(const CoefficientModel& model, const AsymptoticAmplitudes& u,
                     const AsymptoticAmplitudes& v, Index L) {
    const TailSums t = model.tail_sums(L);
    return u.plus * std::conj(v.minus) * t.oscillatory +
           u.minus * std::conj(v.plus) * std::conj(t.oscillatory) +
           (u.plus * std::conj(v.plus) + u.minus * std::conj(v.minus)) * t.reciprocal;
}

template <class T>
cplx tail_corrected_dot(const CoefficientModel& model, std::span<const T> u, std::span<const T> v,
                        Index L) {
    return dot_impl<T, T>(model, u, v, L);
}

template cplx tail_corrected_dot<double>(const CoefficientModel&, std::span<const double>,
                                         std::span<const double>, Index);
template cplx tail_corrected_dot<cplx>(const CoefficientModel&, std::span<const cplx>,
                                       std::span<const cplx>, Index);

InnerProductEvaluator::InnerProductEvaluator(const LcModel& model, Index N)
    : model_(model), N_(N) {
    if (N < 4) throw DomainError("InnerProductEvaluator requires N >= 4");
    if (N >= model.model().usable_limit())
        throw DomainError("truncation " + std::to_string(N) + " exceeds the model's usable range");
    coeffs_ = model.model().table(N);
    p0_.resize(N + 1);
    q0_.resize(N + 1);
    eval_pq_into<double>(coeffs_, 0.0, p0_, q0_);
}

InnerProducts InnerProductEvaluator::at(cplx z) const {
    std::vector<cplx> p(N_ + 1), q(N_ + 1);
    eval_pq_into<cplx>(coeffs_, z, p, q);
    const auto& m = model_.model();
    const std::span<const cplx> ps(p), qs(q);
    const std::span<const double> p0(p0_), q0(q0_);
    InnerProducts r;
    r.pp0 = extrapolated_dot(m, ps, p0, N_);
    r.pq0 = extrapolated_dot(m, ps, q0, N_);
    r.qp0 = extrapolated_dot(m, qs, p0, N_);
    r.qq0 = extrapolated_dot(m, qs, q0, N_);
    r.N_used = N_;
    return r;
}

InnerProductEvaluator::Real InnerProductEvaluator::at_real(double lambda) const {
    std::vector<double> p(N_ + 1), q(N_ + 1);
    eval_pq_into<double>(coeffs_, lambda, p, q);
    const auto& m = model_.model();
    const std::span<const double> ps(p), qs(q), p0(p0_), q0(q0_);
    return {extrapolated_dot(m, ps, p0, N_).real(), extrapolated_dot(m, ps, q0, N_).real(),
            extrapolated_dot(m, qs, p0, N_).real(), extrapolated_dot(m, qs, q0, N_).real()};
}

double InnerProductEvaluator::p_norm_squared(double lambda) const {
    std::vector<double> p(N_ + 1), q(N_ + 1);
    eval_pq_into<double>(coeffs_, lambda, p, q);
    const std::span<const double> ps(p);
    return extrapolated_dot(model_.model(), ps, ps, N_).real();
}

double InnerProductEvaluator::p_norm_squared(cplx z) const {
    std::vector<cplx> p(N_ + 1), q(N_ + 1);
    eval_pq_into<cplx>(coeffs_, z, p, q);
    const std::span<const cplx> ps(p);
    return extrapolated_dot(model_.model(), ps, ps, N_).real();
}

InnerProducts inner_products(const LcModel& model, cplx z, const TruncationOptions& opts) {
    if (!(opts.tol > 0.0)) throw DomainError("inner_products requires tol > 0");
    const Index limit = model.model().usable_limit() - 1;
    Index L = std::min(std::max<Index>(opts.n_min, 8), limit);
    InnerProducts prev;
    bool have_prev = false;
    for (;;) {
        const InnerProducts cur = InnerProductEvaluator(model, L).at(z);
        if (have_prev) {
            double worst = 0.0;
            const cplx a[4] = {cur.pp0, cur.pq0, cur.qp0, cur.qq0};
            const cplx b[4] = {prev.pp0, prev.pq0, prev.qp0, prev.qq0};
            for (int i = 0; i < 4; ++i)
                worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(a[i])));
            if (worst <= opts.tol || L >= limit) {
                InnerProducts out = cur;
                out.tail_estimate = worst;
                if (worst > opts.tol && !model.model().tail_sums(L).complete)
                    throw TruncationError("truncation not converged: model ends at index " +
                                              std::to_string(limit),
                                          {cur.pp0, cur.pq0, cur.qp0, cur.qq0}, worst);
                return out;
            }
            if (2 * L > opts.n_max)
                throw TruncationError("truncation not converged by N_max = " + std::to_string(opts.n_max),
                                      {cur.pp0, cur.pq0, cur.qp0, cur.qq0}, worst);
        }
        prev = cur;
        have_prev = true;
        L = std::min(2 * L, limit);
    }
}

Index choose_truncation(const LcModel& model, std::span<const cplx> probes,
                        const TruncationOptions& opts) {
    Index N = opts.n_min;
    for (const cplx& z : probes) N = std::max(N, inner_products(model, z, opts).N_used);
    return N;
}

}  // namespace jlc
