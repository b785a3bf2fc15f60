#pragma once

#include "jlc/coefficients.hpp"

#include <random>
#include <vector>

namespace fixtures {

inline const jlc::CoefficientModel& model_a() {
    static const auto m = jlc::CoefficientModel::make({jlc::PowerLaw{2.0, 1}, jlc::ZeroDiagonal{}, "A"});
    return m;
}

inline const jlc::CoefficientModel& model_b() {
    static const auto m = jlc::CoefficientModel::make({jlc::Geometric{2.0}, jlc::ZeroDiagonal{}, "B"});
    return m;
}

inline const jlc::CoefficientModel& model_c() {
    static const auto m = jlc::CoefficientModel::make({jlc::PowerLaw{2.0, 1}, jlc::ConstantBeta{0.5}, "C"});
    return m;
}

inline const jlc::LcModel& lc_a() {
    static const auto m = jlc::LcModel::certify(model_a());
    return m;
}

inline const jlc::LcModel& lc_b() {
    static const auto m = jlc::LcModel::certify(model_b());
    return m;
}

inline const jlc::LcModel& lc_c() {
    static const auto m = jlc::LcModel::certify(model_c());
    return m;
}

inline std::vector<const jlc::LcModel*> all_models() { return {&lc_a(), &lc_b(), &lc_c()}; }

inline std::vector<jlc::cplx> random_vector(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<jlc::cplx> h(n);
    for (auto& v : h) v = {u(rng), u(rng)};
    return h;
}

}  // namespace fixtures
