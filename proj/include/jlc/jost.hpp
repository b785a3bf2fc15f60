#pragma once

/// \file jost.hpp
/// \brief Jost solutions, the coefficients sigma_pm, tau_pm, the boundary map
/// u -> (s_+, s_-), the extensions J_omega and the Green pairing.
///
/// The Jost solutions behave like f_n^{(pm)} = a_n^{-1/2} e^{pm i phi_n} (1 + o(1))
/// and have Wronskian {f+, f-} = -2i alpha_inf^{-1} sqrt(1 - beta_inf^2). The
/// polynomials expand as
///
///   p = sigma_+ f+ + sigma_- f-,    q = tau_+ f+ + tau_- f-,
///
/// so sigma_+ = {p, f-} / {f+, f-} and sigma_- = {p, f+} / {f-, f+}.
///
/// Jost solutions come from the backward recurrence seeded at n = N_start,
/// N_start + 1. The seed carries the first-order correction
///
///   exp(-S_n / (2i sin theta)),   S_n = sum_{m>n} (z e_m - k'_m e^{i theta}),
///   e_m = (a_{m-1} a_m)^{-1/2},   k'_m = k_m - 1,   theta = arccos(beta_inf),
///
/// (theta -> -theta for f-), which removes the O(1/N_start) part of the
/// initialization error when beta_n is constant.

#include "jlc/coefficients.hpp"
#include "jlc/extensions.hpp"
#include "jlc/kernels.hpp"
#include "jlc/polynomials.hpp"
#include "jlc/quasiresolvent.hpp"

#include <vector>

namespace jlc {

struct JostOptions {
    Index n_start = 0;  ///< 0: chosen from the regularity tails and tol
    double tol = 1e-8;  ///< accepted relative Wronskian deviation
    int max_retries = 4;
};

struct JostData {
    cplx z;
    std::vector<cplx> f_plus;   ///< indices 0..n_start+1
    std::vector<cplx> f_minus;
    Index n_start = 0;
    double wronskian_deviation = 0.0;  ///< max_n |{f+, f-}_n - target| / |target|
    int retries = 0;
};

/// -2i alpha_inf^{-1} sqrt(1 - beta_inf^2)
cplx jost_wronskian_target(const LcModel& model);

/// Smallest power of two >= 256 whose squared regularity tail is below tol.
Index default_jost_start(const LcModel& model, double tol);

/// Backward-recurrence Jost solutions at a fixed N_start. Holds the seed tail
/// sums, which do not depend on z; immutable and shareable across threads.
class JostSolver {
public:
    JostSolver(const LcModel& model, Index n_start);

    Index n_start() const { return n_start_; }
    const LcModel& model() const { return model_; }
    /// a_n, b_n for n = 0..n_start+1
    const CoefficientModel::Table& coefficients() const { return coeffs_; }

    JostData solve(cplx z) const;

private:
    LcModel model_;
    Index n_start_;
    CoefficientModel::Table coeffs_;
    double theta_;
    double e_tail_[2];  ///< sum_{m>n} e_m for n = n_start, n_start + 1
    double k_tail_[2];
};

/// Jost solutions with quality control: retries with doubled N_start while
/// the Wronskian deviation exceeds tol. Throws ConvergenceError carrying the
/// achieved deviation when the retries run out.
JostData jost_solutions(const LcModel& model, cplx z, const JostOptions& opts = {});

struct ScatteringCoeffs {
    cplx z;
    cplx sigma_plus, sigma_minus, tau_plus, tau_minus;
    /// |-2i alpha^{-1} sqrt(1 - beta^2) (sigma_+ tau_- - sigma_- tau_+) - 1|
    double identity_residual = 0.0;
    /// largest relative spread of the Wronskians over the band
    double band_spread = 0.0;
};

/// Band used to read off Wronskians: [n_start / 4, n_start / 2].
struct Band {
    Index lo = 0, hi = 0;
};
Band interior_band(Index n_start);

/// Coefficients from band-averaged Wronskians of p, q with the Jost pair.
/// `table` must reach the upper band end + 1. Throws ConvergenceError when the
/// band spread exceeds spread_tol.
ScatteringCoeffs scattering_coeffs(const LcModel& model, const JostData& jost, const PolyTable& table,
                                   double spread_tol = 1e-6);
ScatteringCoeffs scattering_coeffs(const LcModel& model, cplx z, const JostOptions& opts = {});
/// Same coefficients from a prepared solver, without the band-spread check;
/// used by real-axis scans.
ScatteringCoeffs scattering_coeffs(const JostSolver& solver, cplx z);

struct BoundaryData {
    cplx s_plus;
    cplx s_minus;
};

/// Asymptotic coefficients of u ~ a_n^{-1/2} (s_+ e^{i phi_n} + s_- e^{-i phi_n})
/// via Gamma and <(J - z) u, p(conj z)>. `L` is the truncation for the
/// pairings (0: adaptive).
BoundaryData boundary_data(const LcModel& model, const MaximalVector& u, const ScatteringCoeffs& at_z,
                           Index L = 0);
BoundaryData boundary_data(const LcModel& model, const MaximalVector& u, cplx z = 0.0,
                           const JostOptions& opts = {}, Index L = 0);

class ExtensionParamOmega {
public:
    /// Throws DomainError unless | |omega| - 1 | <= 1e-12.
    static ExtensionParamOmega make(cplx omega);
    static ExtensionParamOmega from_angle(double chi);

    cplx value() const { return omega_; }
    double angle() const { return std::arg(omega_); }

private:
    explicit ExtensionParamOmega(cplx omega) : omega_(omega) {}
    cplx omega_;
};

/// -(tau_+ - omega tau_-) / (sigma_+ - omega sigma_-); SpectralPointError at a
/// vanishing denominator.
cplx gamma_omega(const ScatteringCoeffs& c, const ExtensionParamOmega& omega);
cplx gamma_omega(const LcModel& model, cplx z, const ExtensionParamOmega& omega, const JostOptions& opts = {});

/// Eigenvalues of J_omega: on the real axis sigma_- = conj(sigma_+), so with
/// omega = e^{i chi} the condition sigma_+ = omega sigma_- reads
/// Im(e^{-i chi/2} sigma_+(lambda)) = 0. Roots whose |sigma_+ - omega sigma_-|
/// exceeds `verify_tol` (relative to |sigma_+|) produce a warning.
Spectrum omega_eigenvalues(const LcModel& model, const ExtensionParamOmega& omega, const Window& window,
                           const ScanOptions& scan = {}, const JostOptions& jost = {},
                           double verify_tol = 1e-6);

/// t with gamma_t(z) = gamma_omega(z).
Calibration calibrate_omega(const LcModel& model, const ExtensionParamOmega& omega, cplx z,
                            const JostOptions& opts = {}, double tol = 1e-10);

struct GreenPairing {
    cplx band_limit;     ///< lim a_n (u_{n+1} conj v_n - u_n conj v_{n+1})
    cplx boundary_form;  ///< 2i alpha^{-1} sqrt(1 - beta^2) (s+(u) conj s+(v) - s-(u) conj s-(v))
    double band_spread = 0.0;
    double deviation() const { return std::abs(band_limit - boundary_form); }
};

/// Both formulas for the Green pairing. The band values are corrected by
/// (w_u - conj w_v) times the tail sum beyond n, so the band limit is exact
/// up to that tail estimate even when u, v are not real-parameter solutions.
GreenPairing green_pairing(const LcModel& model, const MaximalVector& u, const MaximalVector& v,
                           const JostOptions& opts = {}, Index L = 0, double spread_tol = 1e-6);

}  // namespace jlc
