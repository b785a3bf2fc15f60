#pragma once

/// \file extensions.hpp
/// \brief The self-adjoint extensions J_t, t in R or t = infinity.
///
/// With pp0 = <p(z), p(0)>, pq0 = <p(z), q(0)>, qp0 = <q(z), p(0)>,
/// qq0 = <q(z), q(0)>, the resolvent of J_t is
///
///   R_t(z) h = gamma_t(z) <h, p(conj z)> p(z) + R(z) h
///
///   gamma_t(z)   = (z qq0 + (1 + z qp0) t) / (1 - z pq0 - z pp0 t)
///   gamma_inf(z) = -(1 + z qp0) / (z pp0)
///
/// gamma_t(z) = <R_t(z) e_0, e_0> is the Cauchy-Stieltjes transform of the
/// spectral measure of J_t, and the eigenvalues of J_t are the zeros of the
/// denominator on the real axis.

#include "jlc/coefficients.hpp"
#include "jlc/kernels.hpp"
#include "jlc/polynomials.hpp"

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace jlc {

class ExtensionParamT {
public:
    struct Infinity {
        bool operator==(const Infinity&) const = default;
    };

    /// Throws DomainError for a non-finite t.
    static ExtensionParamT finite(double t);
    static ExtensionParamT infinity() { return ExtensionParamT(Infinity{}); }

    bool is_infinite() const { return std::holds_alternative<Infinity>(value_); }
    /// Throws DomainError for t = infinity.
    double value() const;
    std::string to_string() const;

    bool operator==(const ExtensionParamT&) const = default;

private:
    explicit ExtensionParamT(std::variant<double, Infinity> v) : value_(v) {}
    std::variant<double, Infinity> value_;
};

/// gamma_t = numerator / denominator.
struct NevanlinnaPair {
    cplx numerator;
    cplx denominator;
};
NevanlinnaPair nevanlinna(const InnerProducts& ip, cplx z, const ExtensionParamT& t);

struct NevanlinnaReal {
    double numerator;
    double denominator;
};
NevanlinnaReal nevanlinna(const InnerProductEvaluator::Real& ip, double lambda, const ExtensionParamT& t);

/// Throws SpectralPointError when the denominator vanishes to rounding.
cplx gamma_t(const InnerProducts& ip, cplx z, const ExtensionParamT& t);
cplx gamma_t(const LcModel& model, cplx z, const ExtensionParamT& t, double tol = 1e-10);

/// R_t(z) h on indices 0..N for finitely supported h.
std::vector<cplx> resolvent_apply(const LcModel& model, cplx z, const ExtensionParamT& t,
                                  std::span<const cplx> h, Index N, double tol = 1e-10);

struct Window {
    double lo = -20.0;
    double hi = 20.0;
};

struct ScanOptions {
    double grid = 0.05;
    double root_tol = 1e-10;  ///< bisection width
    double tol = 1e-10;       ///< inner-product truncation tolerance
    Index N = 0;              ///< 0: chosen from tol
    Execution exec = Execution::parallel;
};

/// Truncation used by real-axis scans: the largest of the adaptive choices at
/// i and at the window end points shifted by i.
Index scan_truncation(const LcModel& model, const Window& window, double tol);

/// D_t(lambda): 1 - lambda pq0 - lambda t pp0, or lambda pp0 for t = infinity.
double spectral_denominator(const InnerProductEvaluator& ev, double lambda, const ExtensionParamT& t);

struct Spectrum {
    std::vector<double> eigenvalues;
    std::vector<std::string> warnings;
    Index N_used = 0;
};

/// Eigenvalues of J_t in the window: sign changes of D_t on the grid, then bisection.
Spectrum eigenvalues(const LcModel& model, const ExtensionParamT& t, const Window& window,
                     const ScanOptions& opts = {});
Spectrum eigenvalues(const InnerProductEvaluator& ev, const ExtensionParamT& t, const Window& window,
                     const ScanOptions& opts = {});

struct Atom {
    double lambda = 0.0;
    double mass = 0.0;          ///< 1 / sum_n p_n(lambda)^2
    double residual = 0.0;      ///< |D_t(lambda)|
    double residue_mass = 0.0;  ///< -N_t(lambda) / D_t'(lambda)
    double deviation = 0.0;     ///< |mass - residue_mass| / mass
    bool flagged = false;       ///< deviation above the tolerance
};

struct SpectralMeasure {
    ExtensionParamT t = ExtensionParamT::finite(0.0);
    Window window;
    std::vector<Atom> atoms;
    std::vector<std::string> warnings;
    Index N_used = 0;

    double total_mass() const;
    /// sum_k lambda_k^n m_k
    double moment(int n) const;
    /// sum_k m_k / (lambda_k - z)
    cplx stieltjes(cplx z) const;
};

/// Atoms of the spectral measure of J_t in the window. `mass_tol` bounds the
/// relative disagreement between the two mass computations before an atom
/// is flagged.
SpectralMeasure spectral_measure(const LcModel& model, const ExtensionParamT& t, const Window& window,
                                 const ScanOptions& opts = {}, double mass_tol = 1e-6);
SpectralMeasure spectral_measure(const InnerProductEvaluator& ev, const ExtensionParamT& t,
                                 const Window& window, const ScanOptions& opts = {},
                                 double mass_tol = 1e-6);

/// s_0..s_{n_max} with s_n = (J^n e_0, e_0), using the N x N truncation.
/// Throws DomainError when N is too small for the entries to be exact.
std::vector<double> moments(const CoefficientModel& model, int n_max, Index N);

/// Real t with gamma_t(z) = gamma, or infinity when the solved t exceeds 1/tiny.
struct Calibration {
    ExtensionParamT t = ExtensionParamT::finite(0.0);
    double imag_residual = 0.0;  ///< |Im t| of the solved value (0 in exact arithmetic)
};
Calibration calibrate_t(const InnerProducts& ip, cplx z, cplx gamma);

}  // namespace jlc
