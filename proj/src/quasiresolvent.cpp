#include "jlc/quasiresolvent.hpp"

#include "jlc/error.hpp"

#include <algorithm>
#include <cmath>

namespace jlc {

std::vector<cplx> apply_shifted_jacobi(const CoefficientModel& model, std::span<const cplx> u, cplx z) {
    const Index K = u.size();
    std::vector<cplx> out(K + 1, 0.0);
    if (K == 0) return out;
    auto at = [&](Index n) { return n < K ? u[n] : cplx(0.0); };
    for (Index n = 0; n <= K; ++n) {
        cplx v = (model.b(n) - z) * at(n) + model.a(n) * at(n + 1);
        if (n > 0) v += model.a(n - 1) * at(n - 1);
        out[n] = v;
    }
    return out;
}

Index truncation_margin(Index N) { return std::max<Index>(2, (N + 9) / 10); }

QuasiResolvent::QuasiResolvent(const LcModel& model, cplx z, Index N)
    : QuasiResolvent(model, eval_pq(model.model(), z, N)) {}

QuasiResolvent::QuasiResolvent(const LcModel& model, PolyTable table)
    : model_(model), table_(std::move(table)) {
    if (table_.N < 4) throw DomainError("QuasiResolvent requires N >= 4");
}

QuasiResolvent QuasiResolvent::tilted(cplx c) const {
    PolyTable t = table_;
    for (Index n = 0; n <= t.N; ++n) t.q[n] += c * t.p[n];
    return QuasiResolvent(model_, std::move(t));
}

std::vector<cplx> QuasiResolvent::apply(std::span<const cplx> h) const {
    const Index N = table_.N;
    if (h.size() > N + 1)
        throw DomainError("quasiresolvent table too short: h has " + std::to_string(h.size()) +
                          " entries, table ends at " + std::to_string(N));
    const auto& p = table_.p;
    const auto& q = table_.q;
    std::vector<cplx> y(N + 2, 0.0);
    for (Index m = h.size(); m-- > 0;) y[m] = y[m + 1] + q[m] * h[m];
    std::vector<cplx> out(N + 1);
    cplx x = 0.0;
    for (Index n = 0; n <= N; ++n) {
        if (n < h.size()) x += p[n] * h[n];
        out[n] = q[n] * x + p[n] * y[n + 1];
    }
    return out;
}

double QuasiResolvent::residual(std::span<const cplx> h, bool row_scaled) const {
    const auto u = apply(h);
    const auto& m = model_.model();
    const Index last = table_.N - truncation_margin(table_.N);
    double worst = 0.0;
    for (Index n = 0; n <= last; ++n) {
        cplx v = (m.b(n) - table_.z) * u[n] + m.a(n) * u[n + 1];
        if (n > 0) v += m.a(n - 1) * u[n - 1];
        const cplx target = n < h.size() ? h[n] : cplx(0.0);
        double scale = 1.0;
        if (row_scaled) {
            double terms = std::abs(m.b(n) - table_.z) * std::abs(u[n]) + m.a(n) * std::abs(u[n + 1]);
            if (n > 0) terms += m.a(n - 1) * std::abs(u[n - 1]);
            scale = std::max(1.0, terms);
        }
        worst = std::max(worst, std::abs(v - target) / scale);
    }
    return worst;
}

QuasiResolvent::HsNorm QuasiResolvent::hs_norm(double tol, Execution exec) const {
    const std::span<const cplx> p(table_.p), q(table_.q);
    const Index half = table_.N / 2 + 1;
    HsNorm r;
    r.value = kernel_frobenius_dense(p, q, exec);
    r.half_value = kernel_frobenius_dense(p.first(half), q.first(half), exec);
    r.growth_warning = std::abs(r.value - r.half_value) > tol * std::max(1.0, r.value);
    return r;
}

std::vector<cplx> QuasiResolvent::dense_kernel() const {
    const Index size = table_.N + 1;
    std::vector<cplx> k(size * size);
    for (Index n = 0; n < size; ++n)
        for (Index m = 0; m < size; ++m)
            k[n * size + m] = m <= n ? table_.q[n] * table_.p[m] : table_.p[n] * table_.q[m];
    return k;
}

MaximalVector MaximalVector::from_finite(std::vector<cplx> values) {
    return {0.0, 0.0, 0.0, std::move(values)};
}

MaximalVector MaximalVector::p_solution(cplx w, cplx scale) { return {w, scale, 0.0, {}}; }

MaximalVector MaximalVector::q_solution(cplx w, cplx scale) { return {w, 0.0, scale, {}}; }

MaximalVector MaximalVector::resolvent_image(const CoefficientModel& model, cplx w,
                                             std::span<const cplx> h) {
    const Index K = h.size();
    if (K == 0) return {w, 0.0, 0.0, {}};
    const Index N = std::max<Index>(K, 2);
    const PolyTable t = eval_pq(model, w, N);
    std::vector<cplx> x(K), y(K + 1, 0.0);
    cplx running = 0.0;
    for (Index n = 0; n < K; ++n) x[n] = running += t.p[n] * h[n];
    for (Index m = K; m-- > 0;) y[m] = y[m + 1] + t.q[m] * h[m];
    const cplx X = x[K - 1];
    // For n >= K-1 the image is X q_n(w); the finite part is the difference.
    std::vector<cplx> d(K > 1 ? K - 1 : 0);
    for (Index n = 0; n + 1 < K; ++n) d[n] = t.q[n] * (x[n] - X) + t.p[n] * y[n + 1];
    return {w, 0.0, X, std::move(d)};
}

MaximalVector MaximalVector::operator+(const MaximalVector& other) const {
    const bool mine = coef_p != cplx(0.0) || coef_q != cplx(0.0);
    const bool theirs = other.coef_p != cplx(0.0) || other.coef_q != cplx(0.0);
    if (mine && theirs && w != other.w)
        throw DomainError("MaximalVector sum requires a common spectral parameter");
    MaximalVector r;
    r.w = mine ? w : other.w;
    r.coef_p = coef_p + other.coef_p;
    r.coef_q = coef_q + other.coef_q;
    r.finite.assign(std::max(finite.size(), other.finite.size()), 0.0);
    for (Index n = 0; n < finite.size(); ++n) r.finite[n] += finite[n];
    for (Index n = 0; n < other.finite.size(); ++n) r.finite[n] += other.finite[n];
    return r;
}

MaximalVector MaximalVector::scaled(cplx c) const {
    MaximalVector r = *this;
    r.coef_p *= c;
    r.coef_q *= c;
    for (auto& v : r.finite) v *= c;
    return r;
}

MaximalVector MaximalVector::shifted(const CoefficientModel& model, cplx z) const {
    // J p(w) = w p(w),  J q(w) = w q(w) + e_0
    MaximalVector r;
    r.w = w;
    r.coef_p = coef_p * (w - z);
    r.coef_q = coef_q * (w - z);
    r.finite = apply_shifted_jacobi(model, finite, z);
    if (coef_q != cplx(0.0)) {
        if (r.finite.empty()) r.finite.assign(1, 0.0);
        r.finite[0] += coef_q;
    }
    return r;
}

cplx MaximalVector::entry0() const { return coef_p + (finite.empty() ? cplx(0.0) : finite[0]); }

std::vector<cplx> MaximalVector::values(const CoefficientModel& model, Index L) const {
    std::vector<cplx> out(L + 1, 0.0);
    if (coef_p != cplx(0.0) || coef_q != cplx(0.0)) {
        const PolyTable t = eval_pq(model, w, std::max<Index>(L, 2));
        for (Index n = 0; n <= L; ++n) out[n] = coef_p * t.p[n] + coef_q * t.q[n];
    }
    for (Index n = 0; n < finite.size() && n <= L; ++n) out[n] += finite[n];
    return out;
}

namespace {

cplx finite_dot(std::span<const cplx> u, std::span<const cplx> v, Index count) {
    cplx s = 0.0;
    for (Index n = 0; n < count; ++n) s += u[n] * std::conj(v[n]);
    return s;
}

}  // namespace

cplx inner(const CoefficientModel& model, const MaximalVector& u, const MaximalVector& v, Index L) {
    if (u.is_finite() || v.is_finite()) {
        const Index count = u.is_finite() ? u.finite.size() : v.finite.size();
        if (count == 0) return 0.0;
        const auto uu = u.values(model, count - 1);
        const auto vv = v.values(model, count - 1);
        return finite_dot(uu, vv, count);
    }
    L = std::max({L, u.support_end() + 1, v.support_end() + 1, Index{8}});
    const auto uu = u.values(model, L);
    const auto vv = v.values(model, L);
    return tail_corrected_dot<cplx>(model, uu, vv, L);
}

cplx pair_with_p(const CoefficientModel& model, const MaximalVector& u, cplx zeta, Index L) {
    return inner(model, u, MaximalVector::p_solution(zeta), L);
}

cplx pair_with_q(const CoefficientModel& model, const MaximalVector& u, cplx zeta, Index L) {
    return inner(model, u, MaximalVector::q_solution(zeta), L);
}

cplx gamma_coefficient(const CoefficientModel& model, const MaximalVector& u, cplx z, Index L) {
    return u.entry0() - pair_with_q(model, u.shifted(model, z), std::conj(z), L);
}

cplx gamma_coefficient(const CoefficientModel& model, std::span<const cplx> u, cplx z) {
    return gamma_coefficient(model, MaximalVector::from_finite({u.begin(), u.end()}), z, 0);
}

LemmaResiduals lemma_residuals(const LcModel& model, cplx z, Index N) {
    const QuasiResolvent r0(model, 0.0, N);
    const PolyTable tz = eval_pq(model.model(), z, N);
    const auto& p0 = r0.table().p;
    const auto& q0 = r0.table().q;
    const auto rp = r0.apply(tz.p);
    const auto rq = r0.apply(tz.q);
    LemmaResiduals out;
    // (R(0) h)_0 = sum_{m>=1} q_m(0) h_m since q_0 = 0
    out.pq0 = rp[0];
    out.qq0 = rq[0];
    const Index last = N - truncation_margin(N);
    for (Index n = 0; n <= last; ++n) {
        const cplx ep = tz.p[n] - (1.0 - z * out.pq0) * p0[n] - z * rp[n];
        const cplx eq = tz.q[n] + z * out.qq0 * p0[n] - q0[n] - z * rq[n];
        out.p_identity = std::max(out.p_identity, std::abs(ep));
        out.q_identity = std::max(out.q_identity, std::abs(eq));
    }
    return out;
}

}  // namespace jlc
