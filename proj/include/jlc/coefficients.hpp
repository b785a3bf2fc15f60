#pragma once

/// \file coefficients.hpp
/// \brief Recurrence-coefficient models for semi-infinite Jacobi matrices.
///
/// A model produces the off-diagonal entries a_n > 0 and the diagonal entries
/// b_n of
///
///     | b_0 a_0  0   0  ... |
///     | a_0 b_1 a_1  0  ... |
///     |  0  a_1 b_2 a_2 ... |
///
/// together with the derived sequences used by the asymptotic theory:
///
///     beta_n  = -b_n / (2 sqrt(a_{n-1} a_n))
///     alpha_n = sqrt(a_{n+1} / a_n)
///     k_n     = alpha_{n-1} / alpha_n = a_n / sqrt(a_{n-1} a_{n+1})
///     theta_n = arccos(beta_n)                      (only where |beta_n| <= 1)
///     phi_n   = sum_{m<n, |beta_m|<=1} theta_m
///
/// At n = 0 the convention a_{-1} := a_0 is used, so beta_0 = -b_0 / (2 a_0).
/// Models are immutable value handles; copies share state and every const
/// member may be called concurrently.

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace jlc {

using cplx = std::complex<double>;
using Index = std::size_t;

/// a_n = (n + shift)^p
struct PowerLaw {
    double p = 2.0;
    int shift = 1;
};

/// a_n = x^n
struct Geometric {
    double x = 2.0;
};

/// Explicit values for indices 0..values.size()-1.
struct Tabulated {
    std::vector<double> values;
};

/// b_n = 0
struct ZeroDiagonal {};

/// b_n chosen so that beta_n == beta for every n.
struct ConstantBeta {
    double beta = 0.0;
};

using OffDiagonalSpec = std::variant<PowerLaw, Geometric, Tabulated>;
using DiagonalSpec = std::variant<ZeroDiagonal, ConstantBeta, Tabulated>;

struct ModelDescriptor {
    OffDiagonalSpec a;
    DiagonalSpec b = ZeroDiagonal{};
    std::string name;
};

/// Values of the derived sequences at one index.
struct DerivedValues {
    Index n = 0;
    double beta = 0.0;
    double alpha = 0.0;
    double k = 0.0;                ///< NaN at n = 0
    std::optional<double> theta;   ///< empty when |beta_n| > 1
    double phi = 0.0;
};

/// Limits alpha_inf and beta_inf. Exact for parametric models, estimated from
/// the table end for tabulated ones.
struct AsymptoticConstants {
    double alpha_inf = 1.0;
    double beta_inf = 0.0;
    bool exact = true;

    /// sqrt(1 - beta_inf^2) / alpha_inf, the scale of every boundary form.
    double boundary_scale() const;
};

/// Sums over the tail n > L that the asymptotic tail correction needs.
struct TailSums {
    double reciprocal = 0.0;   ///< sum_{n>L} 1/a_n
    cplx oscillatory;          ///< sum_{n>L} exp(2 i phi_n)/a_n
    bool complete = true;      ///< false when the model ends before the tail is exhausted
};

class CoefficientModel {
public:
    /// Validates the descriptor. Rejects p <= 0, x <= 1, shift < 1, and any
    /// non-positive tabulated a_n (the message names the offending index).
    static CoefficientModel make(ModelDescriptor descriptor);

    const ModelDescriptor& descriptor() const;
    std::string label() const;

    double a(Index n) const;
    double b(Index n) const;

    /// Largest index with tabulated data, if the model is finite.
    std::optional<Index> max_index() const;
    /// Largest index for which a_{n+1} is finite and a_n^{-1} does not
    /// underflow; combines max_index with floating-point range.
    Index usable_limit() const;

    double beta(Index n) const;
    double alpha(Index n) const;
    double k(Index n) const;
    std::optional<double> theta(Index n) const;
    double phi(Index n) const;
    DerivedValues derived(Index n) const;

    /// Number of indices m < n whose phase increment is skipped (|beta_m| > 1).
    Index skipped_phase_count(Index n) const;

    AsymptoticConstants asymptotics() const;

    /// sum_{n>L} 1/a_n and sum_{n>L} e^{2 i phi_n}/a_n; cached per L.
    TailSums tail_sums(Index L) const;
    /// sum_{n>L} |k_n - 1| + sum_{n>L} |beta_{n+1} - beta_n|, estimated.
    double regularity_tail(Index L) const;
    /// Exponent e with initialization error ~ L^{-e} for backward recurrences
    /// started at L; empty when the error is not algebraic.
    std::optional<double> truncation_order() const;

    /// True when beta_n is the same for every n (zero or constant-beta diagonal).
    bool uniform_beta() const;

    /// a_0..a_{upto} and b_0..b_{upto} materialized for tight loops.
    struct Table {
        std::vector<double> a, b;
        Index size() const { return a.size(); }
    };
    Table table(Index upto) const;

private:
    struct State;
    explicit CoefficientModel(std::shared_ptr<const State> state);
    std::shared_ptr<const State> state_;
};

enum class Regime { LC_candidate, LP_carleman, LP_large_beta, critical, inconclusive };

std::string to_string(Regime regime);

/// A yes/no decision drawn from finitely many terms, with a heuristic
/// confidence in [0, 1].
struct Verdict {
    bool value = false;
    double confidence = 0.0;
};

struct RegimeReport {
    Index horizon = 0;                 ///< requested horizon
    Index effective_horizon = 0;       ///< clipped to the model's usable range
    double tol = 0.0;
    double carleman_sum_partial = 0.0;
    double carleman_last_decade = 0.0; ///< contribution of the last 10% of terms
    Verdict carleman_convergent;
    Verdict carleman_divergent;
    double beta_inf_estimate = 0.0;
    double beta_spread = 0.0;          ///< standard deviation over the averaging window
    double alpha_inf_estimate = 0.0;
    double alpha_spread = 0.0;
    double k_regularity_sum = 0.0;     ///< partial sum |k_n - 1|
    bool k_regularity_cauchy = false;
    double beta_regularity_sum = 0.0;  ///< partial sum |beta_{n+1} - beta_n|
    bool beta_regularity_cauchy = false;
    Index phase_skip_count = 0;        ///< indices with |beta_n| > 1
    Regime classification = Regime::inconclusive;
    std::vector<std::string> notes;
};

/// Classifies the operator regime from the first `horizon` coefficients.
/// Inconclusive is a legal result. Throws DomainError when horizon < 32 or a
/// tabulated model is shorter than the horizon.
RegimeReport classify(const CoefficientModel& model, Index horizon = 1000, double tol = 1e-3);

/// A model that passed classification as a limit-circle candidate with
/// |beta_inf| < 1. Operations that are meaningless outside the limit-circle
/// case take this type.
class LcModel {
public:
    /// Throws DomainError unless classify() returns LC_candidate.
    static LcModel certify(CoefficientModel model, Index horizon = 1000, double tol = 1e-3);

    const CoefficientModel& model() const { return model_; }
    const RegimeReport& report() const { return report_; }
    const AsymptoticConstants& asymptotics() const { return asymptotics_; }

    double a(Index n) const { return model_.a(n); }
    double b(Index n) const { return model_.b(n); }

private:
    LcModel(CoefficientModel model, RegimeReport report);
    CoefficientModel model_;
    RegimeReport report_;
    AsymptoticConstants asymptotics_;
};

}  // namespace jlc
