#pragma once

/// \file quasiresolvent.hpp
/// \brief The bounded right inverse of (J_max - z) built from p(z) and q(z),
/// and the algebra of vectors in the maximal domain.
///
///   (R(z) h)_n = q_n(z) sum_{m<=n} p_m(z) h_m + p_n(z) sum_{m>n} q_m(z) h_m
///
/// R(z) is applied in O(N) through the prefix sums x_n and suffix sums y_n.
/// For finitely supported h the suffix sums are exact, so (J - z) R(z) h = h
/// holds to rounding on every row whose stencil stays inside the table.

#include "jlc/coefficients.hpp"
#include "jlc/kernels.hpp"
#include "jlc/polynomials.hpp"

#include <span>
#include <vector>

namespace jlc {

/// ((J - z) u)_n for a finitely supported u; the result has u.size() + 1 entries.
std::vector<cplx> apply_shifted_jacobi(const CoefficientModel& model, std::span<const cplx> u, cplx z);

/// Rows excluded from identity checks near the truncation edge: max(2, ceil(N/10)).
Index truncation_margin(Index N);

class QuasiResolvent {
public:
    QuasiResolvent(const LcModel& model, cplx z, Index N);
    QuasiResolvent(const LcModel& model, PolyTable table);

    cplx z() const { return table_.z; }
    Index N() const { return table_.N; }
    const PolyTable& table() const { return table_; }

    /// Same operator with q replaced by q + c p.
    QuasiResolvent tilted(cplx c) const;

    /// R(z) h on indices 0..N. Throws DomainError when h has more than N + 1 entries.
    std::vector<cplx> apply(std::span<const cplx> h) const;

    /// max_n |((J - z) R(z) h - h)_n| over n = 0..N - truncation_margin(N).
    /// With row_scaled, each row is divided by max(1, a_{n-1}|u_{n-1}| +
    /// |b_n - z||u_n| + a_n|u_{n+1}|), the size of the terms that cancel.
    double residual(std::span<const cplx> h, bool row_scaled = false) const;

    struct HsNorm {
        double value = 0.0;       ///< Frobenius norm of the kernel on 0..N
        double half_value = 0.0;  ///< the same on 0..N/2
        bool growth_warning = false;
    };
    /// Frobenius norm of the truncated kernel. Sets growth_warning when the
    /// norm is not Cauchy between N/2 and N within `tol` (a limit-point model
    /// slipping through would grow without bound).
    HsNorm hs_norm(double tol = 1e-3, Execution exec = Execution::parallel) const;

    /// Row-major (N+1) x (N+1) kernel; only for small N.
    std::vector<cplx> dense_kernel() const;

private:
    LcModel model_;
    PolyTable table_;
};

/// A vector of the maximal domain written as
///   u = coef_p p(w) + coef_q q(w) + finite
/// with `finite` finitely supported. Every R(w) h with finitely supported h
/// has this form.
struct MaximalVector {
    cplx w;
    cplx coef_p;
    cplx coef_q;
    std::vector<cplx> finite;

    static MaximalVector from_finite(std::vector<cplx> values);
    static MaximalVector p_solution(cplx w, cplx scale = 1.0);
    static MaximalVector q_solution(cplx w, cplx scale = 1.0);
    /// R(w) h for finitely supported h.
    static MaximalVector resolvent_image(const CoefficientModel& model, cplx w, std::span<const cplx> h);

    MaximalVector operator+(const MaximalVector& other) const;  ///< both at the same w
    MaximalVector scaled(cplx c) const;

    /// (J - z) u, again of the same form.
    MaximalVector shifted(const CoefficientModel& model, cplx z) const;

    cplx entry0() const;
    /// u_0..u_L
    std::vector<cplx> values(const CoefficientModel& model, Index L) const;
    /// Index past which u solves the recurrence at w.
    Index support_end() const { return finite.size() + 1; }
    bool is_finite() const { return coef_p == cplx(0.0) && coef_q == cplx(0.0); }
};

/// <u, v>. Exact for finitely supported vectors; otherwise summed to index L
/// (raised past the finite supports if necessary) plus the asymptotic tail.
cplx inner(const CoefficientModel& model, const MaximalVector& u, const MaximalVector& v, Index L);

/// <u, s(zeta)> where s is p or q evaluated at zeta, i.e. the bilinear sum
/// with the solution at conj(zeta).
cplx pair_with_p(const CoefficientModel& model, const MaximalVector& u, cplx zeta, Index L);
cplx pair_with_q(const CoefficientModel& model, const MaximalVector& u, cplx zeta, Index L);

/// Gamma in u = Gamma p(z) + R(z) (J - z) u, read off entry 0:
///   Gamma = u_0 - <(J - z) u, q(conj z)>.
cplx gamma_coefficient(const CoefficientModel& model, const MaximalVector& u, cplx z, Index L);
/// Finitely supported u (exact).
cplx gamma_coefficient(const CoefficientModel& model, std::span<const cplx> u, cplx z);

/// Residuals of the decompositions of p(z) and q(z) against p(0), q(0):
///   p(z) - (1 - z <p(z), q(0)>) p(0) - z R(0) p(z)
///   q(z) + z <q(z), q(0)> p(0) - q(0) - z R(0) q(z)
/// with R(0) acting on the truncation of p(z), q(z) to 0..N; max over
/// 0..N - truncation_margin(N).
struct LemmaResiduals {
    double p_identity = 0.0;
    double q_identity = 0.0;
    cplx pq0;  ///< <p(z), q(0)> as read from (R(0) p(z))_0
    cplx qq0;
};
LemmaResiduals lemma_residuals(const LcModel& model, cplx z, Index N);

}  // namespace jlc
