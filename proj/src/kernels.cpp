#include "jlc/kernels.hpp"

#include "jlc/error.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>

#ifdef JLC_HAVE_OPENMP
#include <omp.h>
#endif

namespace jlc {

int thread_count() {
#ifdef JLC_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_thread_count(int threads) {
#ifdef JLC_HAVE_OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

namespace {

template <class X, class Y>
std::vector<Y> map_impl(const std::function<Y(X)>& f, std::span<const X> xs, Execution exec) {
    std::vector<Y> out(xs.size());
    const auto count = static_cast<std::ptrdiff_t>(xs.size());
    if (exec == Execution::serial) {
        for (std::ptrdiff_t i = 0; i < count; ++i) out[i] = f(xs[i]);
        return out;
    }
    std::exception_ptr failure;
    std::mutex guard;
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            out[i] = f(xs[i]);
        } catch (...) {
            std::lock_guard lock(guard);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace

std::vector<double> map_grid(const std::function<double(double)>& f, std::span<const double> xs,
                             Execution exec) {
    return map_impl<double, double>(f, xs, exec);
}

std::vector<cplx> map_grid(const std::function<cplx(cplx)>& f, std::span<const cplx> zs,
                           Execution exec) {
    return map_impl<cplx, cplx>(f, zs, exec);
}

double kernel_frobenius_dense(std::span<const cplx> p, std::span<const cplx> q, Execution exec) {
    if (p.size() != q.size()) throw DomainError("kernel_frobenius_dense: size mismatch");
    const auto size = static_cast<std::ptrdiff_t>(p.size());
    double total = 0.0;
    if (exec == Execution::serial) {
        for (std::ptrdiff_t n = 0; n < size; ++n) {
            for (std::ptrdiff_t m = 0; m < size; ++m) {
                const cplx k = m <= n ? q[n] * p[m] : p[n] * q[m];
                total += std::norm(k);
            }
        }
        return std::sqrt(total);
    }
#pragma omp parallel for reduction(+ : total) schedule(static)
    for (std::ptrdiff_t n = 0; n < size; ++n) {
        double row = 0.0;
        for (std::ptrdiff_t m = 0; m < size; ++m) {
            const cplx k = m <= n ? q[n] * p[m] : p[n] * q[m];
            row += std::norm(k);
        }
        total += row;
    }
    return std::sqrt(total);
}

double kernel_frobenius_prefix(std::span<const cplx> p, std::span<const cplx> q) {
    if (p.size() != q.size()) throw DomainError("kernel_frobenius_prefix: size mismatch");
    const Index size = p.size();
    std::vector<double> suffix_q(size + 1, 0.0);
    for (Index m = size; m-- > 0;) suffix_q[m] = suffix_q[m + 1] + std::norm(q[m]);
    double prefix_p = 0.0, total = 0.0;
    for (Index n = 0; n < size; ++n) {
        prefix_p += std::norm(p[n]);
        total += std::norm(q[n]) * prefix_p + std::norm(p[n]) * suffix_q[n + 1];
    }
    return std::sqrt(total);
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
    if (!(hi > lo)) throw DomainError("grid window must be nonempty");
    if (!(step > 0.0)) throw DomainError("grid step must be positive");
    const auto intervals = static_cast<Index>(std::ceil((hi - lo) / step - 1e-9));
    std::vector<double> xs(intervals + 1);
    for (Index i = 0; i < intervals; ++i) xs[i] = lo + static_cast<double>(i) * step;
    xs[intervals] = hi;
    return xs;
}

std::vector<Bracket> sign_change_brackets(std::span<const double> xs, std::span<const double> fx) {
    if (xs.size() != fx.size()) throw DomainError("sign_change_brackets: size mismatch");
    std::vector<Bracket> out;
    for (Index i = 0; i < xs.size(); ++i) {
        if (fx[i] == 0.0) {
            out.push_back({xs[i], xs[i], 0.0, 0.0});
            continue;
        }
        if (i + 1 < xs.size() && fx[i + 1] != 0.0 && std::signbit(fx[i]) != std::signbit(fx[i + 1]))
            out.push_back({xs[i], xs[i + 1], fx[i], fx[i + 1]});
    }
    return out;
}

double bisect(const std::function<double(double)>& f, Bracket b, double tol) {
    if (b.lo == b.hi) return b.lo;
    double lo = b.lo, hi = b.hi, flo = b.f_lo;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

RootScan scan_roots(const std::function<double(double)>& f, double lo, double hi, double step, double tol,
                    Execution exec) {
    RootScan out;
    const auto xs = uniform_grid(lo, hi, step);
    const auto fx = map_grid(f, xs, exec);
    out.evaluations = xs.size();
    const auto brackets = sign_change_brackets(xs, fx);
    std::vector<double> roots(brackets.size());
    const auto count = static_cast<std::ptrdiff_t>(brackets.size());
    std::vector<Index> evals(brackets.size(), 0);
    std::exception_ptr failure;
    std::mutex guard;
#pragma omp parallel for schedule(dynamic, 1) if (exec == Execution::parallel)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            Index calls = 0;
            roots[i] = bisect(
                [&](double x) {
                    ++calls;
                    return f(x);
                },
                brackets[i], tol);
            evals[i] = calls;
        } catch (...) {
            std::lock_guard lock(guard);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    for (Index e : evals) out.evaluations += e;
    out.roots = std::move(roots);
    for (Index i = 1; i + 1 < xs.size(); ++i) {
        const double fl = fx[i - 1], fm = fx[i], fr = fx[i + 1];
        if (fl == 0.0 || fm == 0.0 || fr == 0.0) continue;
        if (std::signbit(fl) != std::signbit(fm) || std::signbit(fm) != std::signbit(fr)) continue;
        if (!(std::abs(fm) < std::abs(fl) && std::abs(fm) < std::abs(fr))) continue;
        const double curvature = fr - 2.0 * fm + fl;
        if (curvature == 0.0) continue;
        const double vertex = fm - (fr - fl) * (fr - fl) / (8.0 * curvature);
        if (std::signbit(vertex) != std::signbit(fm)) {
            std::ostringstream msg;
            msg << "possible pair of close roots near " << xs[i] << "; refine the grid below " << step;
            out.warnings.push_back(msg.str());
        }
    }
    return out;
}

}  // namespace jlc
