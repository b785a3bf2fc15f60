#pragma once

/// \file kernels.hpp
/// \brief Data-parallel inner loops shared by the spectral modules.
///
/// Every kernel comes in a serial reference form and an OpenMP form selected
/// by `Execution`. The serial form is the one the tests compare against; the
/// parallel form must agree with it bit-for-bit on maps and to rounding on
/// reductions.

#include "jlc/coefficients.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace jlc {

enum class Execution { serial, parallel };

/// Threads used by Execution::parallel (1 when built without OpenMP).
int thread_count();
void set_thread_count(int threads);

/// f(x) for every grid point. Exceptions thrown by f are rethrown on the
/// calling thread (the first one encountered wins).
std::vector<double> map_grid(const std::function<double(double)>& f, std::span<const double> xs,
                             Execution exec = Execution::parallel);
std::vector<cplx> map_grid(const std::function<cplx(cplx)>& f, std::span<const cplx> zs,
                           Execution exec = Execution::parallel);

/// Frobenius norm of the quasiresolvent kernel
///   K_nm = q_n p_m (m <= n),  K_nm = p_n q_m (m > n)
/// on indices 0..size-1, summing the dense matrix entry by entry.
double kernel_frobenius_dense(std::span<const cplx> p, std::span<const cplx> q,
                              Execution exec = Execution::parallel);
/// Same quantity in O(N) from prefix/suffix sums of |p|^2 and |q|^2.
double kernel_frobenius_prefix(std::span<const cplx> p, std::span<const cplx> q);

/// lo..hi encloses a sign change of f.
struct Bracket {
    double lo = 0.0, hi = 0.0;
    double f_lo = 0.0, f_hi = 0.0;
};

/// Uniform grid lo, lo+step, ..., ending exactly at hi.
std::vector<double> uniform_grid(double lo, double hi, double step);

/// Adjacent grid points where the sampled values change sign (exact zeros
/// produce a degenerate bracket lo == hi).
std::vector<Bracket> sign_change_brackets(std::span<const double> xs, std::span<const double> fx);

/// Bisection inside a bracket until the width is below tol.
double bisect(const std::function<double(double)>& f, Bracket bracket, double tol);

struct RootScan {
    std::vector<double> roots;          ///< increasing
    std::vector<std::string> warnings;  ///< suspected root pairs between grid points
    Index evaluations = 0;
};

/// Real roots of f on [lo, hi]: samples f on a grid of the given step (in
/// parallel), bisects every sign change to `tol`, and warns where the sampled
/// values turn back toward zero without crossing it (a parabola through three
/// neighbouring samples changes sign), which usually means two close roots
/// fell between grid points.
RootScan scan_roots(const std::function<double(double)>& f, double lo, double hi, double step, double tol,
                    Execution exec = Execution::parallel);

}  // namespace jlc
