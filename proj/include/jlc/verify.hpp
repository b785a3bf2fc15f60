#pragma once

/// \file verify.hpp
/// \brief The identity suite run by `jlc --command verify`.

#include "jlc/coefficients.hpp"
#include "jlc/extensions.hpp"

#include <string>
#include <vector>

namespace jlc {

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

struct SuiteOptions {
    Index N = 400;            ///< polynomial / quasiresolvent truncation
    double tol = 1e-8;        ///< Jost quality target
    double grid = 0.05;
    Window window{-20.0, 20.0};
    /// Window for the moment-invariance check, wide enough that atoms outside
    /// it do not affect moments up to order 6.
    Window moment_window{-200.0, 200.0};
    double moment_grid = 0.25;
    bool moments = true;
    unsigned seed = 20240601;
};

std::vector<CheckResult> run_identity_suite(const LcModel& model, const SuiteOptions& opts = {});

}  // namespace jlc
