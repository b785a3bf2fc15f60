#pragma once

/// \file polynomials.hpp
/// \brief The polynomial solutions p_n(z), q_n(z) of the Jacobi difference
/// equation and the l^2 pairings built from them.
///
/// Both sequences solve  a_{n-1} u_{n-1} + b_n u_n + a_n u_{n+1} = z u_n  for
/// n >= 1 and are fixed by  p_0 = 1, p_1 = (z - b_0)/a_0, q_0 = 0, q_1 = 1/a_0.
/// Scalar products follow  <u, v> = sum_n u_n conj(v_n).
///
/// In the limit-circle case every solution behaves like
/// a_n^{-1/2} (c_+ e^{i phi_n} + c_- e^{-i phi_n}) for large n, so truncated sums
/// of products of solutions carry a tail of size ~ sum_{n>L} 1/a_n. Sums here
/// add an asymptotic estimate of that tail, fitted from the last two retained
/// values; the remaining error is second order in the tail.

#include "jlc/coefficients.hpp"

#include <span>
#include <vector>

namespace jlc {

struct PolyTable {
    cplx z;
    Index N = 0;
    std::vector<cplx> p;  ///< p_0..p_N
    std::vector<cplx> q;  ///< q_0..q_N
    /// Share of sum(|p_n|^2 + |q_n|^2) carried by the final ceil(N/10) entries.
    double tail_indicator = 0.0;
};

/// Forward three-term recurrence up to index N (N >= 2). Throws OverflowError
/// naming the first non-finite index.
PolyTable eval_pq(const CoefficientModel& model, cplx z, Index N);

/// Fills p, q (size N + 1) from a materialized coefficient table. Works for
/// real (double) and complex arguments.
template <class T>
void eval_pq_into(const CoefficientModel::Table& coeffs, T z, std::span<T> p, std::span<T> q);

/// a_n (u_n v_{n+1} - u_{n+1} v_n)
cplx wronskian(const CoefficientModel& model, std::span<const cplx> u, std::span<const cplx> v,
               Index n);

/// sqrt(a_n) u_n, the amplitude that stays O(1) in the limit-circle case.
std::vector<cplx> rescaled(const CoefficientModel& model, std::span<const cplx> u);

/// Coefficients of u_n ~ a_n^{-1/2} (plus e^{i phi_n} + minus e^{-i phi_n}).
struct AsymptoticAmplitudes {
    cplx plus;
    cplx minus;
};

/// Fits the amplitudes exactly through u_{L-1} and u_L.
template <class T>
AsymptoticAmplitudes fit_amplitudes(const CoefficientModel& model, std::span<const T> u, Index L);

/// Asymptotic estimate of sum_{n>L} u_n conj(v_n) for solutions with the
/// given amplitudes.
cplx asymptotic_tail(const CoefficientModel& model, const AsymptoticAmplitudes& u,
                     const AsymptoticAmplitudes& v, Index L);

/// sum_{n<=L} u_n conj(v_n) plus the asymptotic tail. Both sequences must
/// solve the recurrence (at any spectral parameter) at indices L-1, L.
template <class T>
cplx tail_corrected_dot(const CoefficientModel& model, std::span<const T> u, std::span<const T> v,
                        Index L);

/// <p(z), p(0)>, <p(z), q(0)>, <q(z), p(0)>, <q(z), q(0)>.
struct InnerProducts {
    cplx pp0, pq0, qp0, qq0;
    Index N_used = 0;
    double tail_estimate = 0.0;  ///< change at the last doubling
};

struct TruncationOptions {
    double tol = 1e-10;
    Index n_min = 256;
    Index n_max = Index{1} << 20;
};

/// Adaptive evaluation: N doubles from n_min until every corrected sum changes
/// by less than tol * max(1, |value|). Throws TruncationError (carrying the
/// partial values pp0, pq0, qp0, qq0) when n_max is reached first.
InnerProducts inner_products(const LcModel& model, cplx z, const TruncationOptions& opts = {});

/// Smallest dyadic N that meets `opts.tol` at every probe point.
Index choose_truncation(const LcModel& model, std::span<const cplx> probes,
                        const TruncationOptions& opts = {});

/// Reusable evaluator at a fixed truncation N. Holds the coefficient table and
/// the reference solutions p(0), q(0); immutable and safe to share between
/// threads. Sums are tail-corrected at N/4, N/2 and N and then extrapolated in
/// N, which removes the leading algebraic truncation error.
class InnerProductEvaluator {
public:
    InnerProductEvaluator(const LcModel& model, Index N);

    Index N() const { return N_; }
    const LcModel& model() const { return model_; }
    const CoefficientModel::Table& coefficients() const { return coeffs_; }

    InnerProducts at(cplx z) const;

    /// Real-axis evaluation; all four values are real there.
    struct Real {
        double pp0, pq0, qp0, qq0;
    };
    Real at_real(double lambda) const;

    /// sum_n p_n(lambda)^2 for real lambda.
    double p_norm_squared(double lambda) const;
    /// sum_n |p_n(z)|^2.
    double p_norm_squared(cplx z) const;

    const std::vector<double>& p0() const { return p0_; }
    const std::vector<double>& q0() const { return q0_; }

private:
    LcModel model_;
    Index N_;
    CoefficientModel::Table coeffs_;
    std::vector<double> p0_, q0_;
};

}  // namespace jlc
