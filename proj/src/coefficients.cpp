#include "jlc/coefficients.hpp"

#include "jlc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>

namespace jlc {

namespace {

constexpr double kLargestCoefficient = 1e300;
constexpr Index kIndexCap = Index{1} << 40;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct TailCache {
    std::mutex mutex;
    std::map<Index, TailSums> sums;
};

}  // namespace

struct CoefficientModel::State {
    ModelDescriptor descriptor;
    std::optional<Index> max_index;
    Index usable_limit = 0;
    // Set when beta_n does not depend on n.
    std::optional<double> beta_const;
    // Cumulative phase table, filled only when beta_n varies with n.
    std::vector<double> phi_table;
    std::vector<Index> skip_table;
    std::shared_ptr<TailCache> cache = std::make_shared<TailCache>();

    double a(Index n) const {
        return std::visit(
            overloaded{
                [n](const PowerLaw& m) { return std::pow(static_cast<double>(n) + m.shift, m.p); },
                [n](const Geometric& m) { return std::pow(m.x, static_cast<double>(n)); },
                [n](const Tabulated& m) { return m.values[n]; },
            },
            descriptor.a);
    }

    double b(Index n) const {
        return std::visit(overloaded{
                              [](const ZeroDiagonal&) { return 0.0; },
                              [this, n](const ConstantBeta& m) {
                                  const double prev = n == 0 ? a(0) : a(n - 1);
                                  return -2.0 * m.beta * std::sqrt(prev) * std::sqrt(a(n));
                              },
                              [n](const Tabulated& m) { return m.values[n]; },
                          },
                          descriptor.b);
    }

    double beta(Index n) const {
        if (beta_const) return *beta_const;
        const double prev = n == 0 ? a(0) : a(n - 1);
        return -b(n) / (2.0 * std::sqrt(prev) * std::sqrt(a(n)));
    }
};

CoefficientModel::CoefficientModel(std::shared_ptr<const State> state) : state_(std::move(state)) {}

CoefficientModel CoefficientModel::make(ModelDescriptor descriptor) {
    auto state = std::make_shared<State>();
    std::optional<Index> max_index;
    auto clip = [&max_index](Index last) {
        max_index = max_index ? std::min(*max_index, last) : last;
    };

    Index limit = kIndexCap;
    std::visit(overloaded{
                   [&](const PowerLaw& m) {
                       if (!(m.p > 0.0) || !std::isfinite(m.p))
                           throw DomainError("power model requires p > 0");
                       if (m.shift < 1) throw DomainError("power model requires shift >= 1");
                       const double top = std::pow(kLargestCoefficient, 1.0 / m.p) - m.shift - 2.0;
                       if (top < static_cast<double>(kIndexCap))
                           limit = static_cast<Index>(std::max(top, 2.0));
                   },
                   [&](const Geometric& m) {
                       if (!(m.x > 1.0) || !std::isfinite(m.x))
                           throw DomainError("geometric model requires x > 1");
                       limit = static_cast<Index>(std::floor(std::log(kLargestCoefficient) /
                                                             std::log(m.x))) - 2;
                   },
                   [&](const Tabulated& m) {
                       if (m.values.size() < 3)
                           throw DomainError("tabulated a_n needs at least 3 entries");
                       for (Index n = 0; n < m.values.size(); ++n) {
                           if (!(m.values[n] > 0.0) || !std::isfinite(m.values[n]))
                               throw DomainError("tabulated a_n must be positive and finite; offending index " +
                                                 std::to_string(n));
                       }
                       clip(m.values.size() - 1);
                   },
               },
               descriptor.a);

    std::visit(overloaded{
                   [&](const ZeroDiagonal&) { state->beta_const = 0.0; },
                   [&](const ConstantBeta& m) {
                       if (!std::isfinite(m.beta)) throw DomainError("beta must be finite");
                       state->beta_const = m.beta;
                   },
                   [&](const Tabulated& m) {
                       if (m.values.size() < 3)
                           throw DomainError("tabulated b_n needs at least 3 entries");
                       for (Index n = 0; n < m.values.size(); ++n) {
                           if (!std::isfinite(m.values[n]))
                               throw DomainError("tabulated b_n must be finite; offending index " +
                                                 std::to_string(n));
                       }
                       clip(m.values.size() - 1);
                   },
               },
               descriptor.b);

    if (max_index) limit = std::min(limit, *max_index);
    state->max_index = max_index;
    state->usable_limit = limit;
    state->descriptor = std::move(descriptor);

    if (!state->beta_const) {
        // Tabulated diagonal: the phase is a genuine cumulative sum.
        state->phi_table.assign(limit + 2, 0.0);
        state->skip_table.assign(limit + 2, 0);
        for (Index n = 0; n <= limit; ++n) {
            const double beta = state->beta(n);
            const bool defined = std::abs(beta) <= 1.0;
            state->phi_table[n + 1] = state->phi_table[n] + (defined ? std::acos(beta) : 0.0);
            state->skip_table[n + 1] = state->skip_table[n] + (defined ? 0 : 1);
        }
    }
    return CoefficientModel(std::move(state));
}

const ModelDescriptor& CoefficientModel::descriptor() const { return state_->descriptor; }

std::string CoefficientModel::label() const {
    if (!state_->descriptor.name.empty()) return state_->descriptor.name;
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const PowerLaw& m) { os << "power(p=" << m.p << ",shift=" << m.shift << ")"; },
                   [&](const Geometric& m) { os << "geometric(x=" << m.x << ")"; },
                   [&](const Tabulated& m) { os << "tabulated(" << m.values.size() << ")"; },
               },
               state_->descriptor.a);
    std::visit(overloaded{
                   [&](const ZeroDiagonal&) { os << ",b=zero"; },
                   [&](const ConstantBeta& m) { os << ",beta=" << m.beta; },
                   [&](const Tabulated& m) { os << ",b=tabulated(" << m.values.size() << ")"; },
               },
               state_->descriptor.b);
    return os.str();
}

namespace {
void check_index(const std::optional<Index>& max_index, Index n) {
    if (max_index && n > *max_index)
        throw DomainError("index " + std::to_string(n) + " beyond tabulated range (max " +
                          std::to_string(*max_index) + ")");
}
}  // namespace

double CoefficientModel::a(Index n) const {
    check_index(state_->max_index, n);
    return state_->a(n);
}

double CoefficientModel::b(Index n) const {
    check_index(state_->max_index, n);
    return state_->b(n);
}

std::optional<Index> CoefficientModel::max_index() const { return state_->max_index; }
Index CoefficientModel::usable_limit() const { return state_->usable_limit; }
bool CoefficientModel::uniform_beta() const { return state_->beta_const.has_value(); }

CoefficientModel::Table CoefficientModel::table(Index upto) const {
    check_index(state_->max_index, upto);
    if (upto > state_->usable_limit)
        throw OverflowError("coefficients exceed floating-point range", upto);
    Table t;
    t.a.resize(upto + 1);
    t.b.resize(upto + 1);
    for (Index n = 0; n <= upto; ++n) {
        t.a[n] = state_->a(n);
        t.b[n] = state_->b(n);
    }
    return t;
}

double CoefficientModel::beta(Index n) const {
    check_index(state_->max_index, n);
    return state_->beta(n);
}

double CoefficientModel::alpha(Index n) const {
    check_index(state_->max_index, n + 1);
    if (const auto* g = std::get_if<Geometric>(&state_->descriptor.a)) return std::sqrt(g->x);
    if (const auto* pw = std::get_if<PowerLaw>(&state_->descriptor.a)) {
        const double base = static_cast<double>(n) + pw->shift;
        return std::pow((base + 1.0) / base, 0.5 * pw->p);
    }
    return std::sqrt(state_->a(n + 1) / state_->a(n));
}

double CoefficientModel::k(Index n) const {
    if (n == 0) return std::numeric_limits<double>::quiet_NaN();
    check_index(state_->max_index, n + 1);
    if (std::holds_alternative<Geometric>(state_->descriptor.a)) return 1.0;
    if (const auto* pw = std::get_if<PowerLaw>(&state_->descriptor.a)) {
        const double base = static_cast<double>(n) + pw->shift;
        // a_n^2 / (a_{n-1} a_{n+1}) = (base^2 / (base^2 - 1))^p
        return std::pow(base * base / ((base - 1.0) * (base + 1.0)), 0.5 * pw->p);
    }
    return state_->a(n) / (std::sqrt(state_->a(n - 1)) * std::sqrt(state_->a(n + 1)));
}

std::optional<double> CoefficientModel::theta(Index n) const {
    const double beta = this->beta(n);
    if (std::abs(beta) > 1.0) return std::nullopt;
    return std::acos(beta);
}

double CoefficientModel::phi(Index n) const {
    if (state_->beta_const) {
        const double beta = *state_->beta_const;
        if (std::abs(beta) > 1.0) return 0.0;
        return static_cast<double>(n) * std::acos(beta);
    }
    if (n >= state_->phi_table.size())
        throw DomainError("phase requested beyond tabulated range at index " + std::to_string(n));
    return state_->phi_table[n];
}

Index CoefficientModel::skipped_phase_count(Index n) const {
    if (state_->beta_const) return std::abs(*state_->beta_const) > 1.0 ? n : 0;
    if (n >= state_->skip_table.size())
        throw DomainError("phase requested beyond tabulated range at index " + std::to_string(n));
    return state_->skip_table[n];
}

DerivedValues CoefficientModel::derived(Index n) const {
    DerivedValues d;
    d.n = n;
    d.beta = beta(n);
    d.alpha = alpha(n);
    d.k = k(n);
    d.theta = theta(n);
    d.phi = phi(n);
    return d;
}

double AsymptoticConstants::boundary_scale() const {
    return std::sqrt(1.0 - beta_inf * beta_inf) / alpha_inf;
}

AsymptoticConstants CoefficientModel::asymptotics() const {
    AsymptoticConstants c;
    const auto& desc = state_->descriptor;
    if (state_->beta_const) {
        c.beta_inf = *state_->beta_const;
    }
    if (std::holds_alternative<PowerLaw>(desc.a)) {
        c.alpha_inf = 1.0;
    } else if (const auto* g = std::get_if<Geometric>(&desc.a)) {
        c.alpha_inf = std::sqrt(g->x);
    }
    const bool a_tab = std::holds_alternative<Tabulated>(desc.a);
    const bool b_tab = !state_->beta_const;
    if (a_tab || b_tab) {
        c.exact = false;
        const Index last = state_->usable_limit - 1;
        const Index first = last - std::max<Index>(1, last / 10);
        double sa = 0.0, sb = 0.0;
        for (Index n = first + 1; n <= last; ++n) {
            sa += alpha(n);
            sb += state_->beta(n);
        }
        const double count = static_cast<double>(last - first);
        if (a_tab) c.alpha_inf = sa / count;
        if (b_tab) c.beta_inf = sb / count;
    }
    return c;
}

std::optional<double> CoefficientModel::truncation_order() const {
    if (const auto* pw = std::get_if<PowerLaw>(&state_->descriptor.a)) {
        if (pw->p <= 1.0) return std::nullopt;
        return std::min(1.0, pw->p - 1.0);
    }
    return std::nullopt;
}

TailSums CoefficientModel::tail_sums(Index L) const {
    {
        std::lock_guard lock(state_->cache->mutex);
        if (auto it = state_->cache->sums.find(L); it != state_->cache->sums.end()) return it->second;
    }
    const Index limit = state_->usable_limit;
    TailSums t;
    const auto* pw = std::get_if<PowerLaw>(&state_->descriptor.a);
    const auto* geo = std::get_if<Geometric>(&state_->descriptor.a);
    Index end = limit;
    if (pw) end = std::min(limit, L + std::max<Index>(8 * L, 4096));

    long double rec = 0.0L;
    std::complex<long double> osc = 0.0L;
    for (Index n = L + 1; n <= end; ++n) {
        const double inv = 1.0 / state_->a(n);
        if (geo && inv < 1e-300) break;
        rec += inv;
        const double ph = 2.0 * phi(n);
        osc += std::complex<long double>(inv * std::cos(ph), inv * std::sin(ph));
    }
    t.reciprocal = static_cast<double>(rec);
    t.oscillatory = cplx(static_cast<double>(osc.real()), static_cast<double>(osc.imag()));

    if (pw && end < limit) {
        // Midpoint rule for the smooth remainder, summation by parts for the
        // oscillating one (exp(2 i phi_n) is geometric with ratio w there).
        const double s = end + 0.5 + pw->shift;
        t.reciprocal += std::pow(s, 1.0 - pw->p) / (pw->p - 1.0);
        const double theta = std::abs(*state_->beta_const) <= 1.0 ? std::acos(*state_->beta_const) : 0.0;
        const cplx w = std::polar(1.0, 2.0 * theta);
        if (std::abs(1.0 - w) > 1e-12) {
            const Index m = end + 1;
            t.oscillatory += std::polar(1.0, 2.0 * phi(m)) / (state_->a(m) * (1.0 - w));
        }
    } else if (!geo && pw == nullptr) {
        t.complete = false;
    } else if (pw && end >= limit) {
        t.complete = false;
    }

    std::lock_guard lock(state_->cache->mutex);
    state_->cache->sums.emplace(L, t);
    return t;
}

double CoefficientModel::regularity_tail(Index L) const {
    const Index limit = state_->usable_limit;
    double total = 0.0;
    if (std::holds_alternative<Geometric>(state_->descriptor.a)) {
        total = 0.0;
    } else if (const auto* pw = std::get_if<PowerLaw>(&state_->descriptor.a)) {
        const Index end = std::min(limit - 1, L + std::max<Index>(4 * L, 1024));
        for (Index n = L + 1; n <= end; ++n) total += std::abs(k(n) - 1.0);
        if (end < limit - 1) total += 0.5 * pw->p / (end + 0.5 + pw->shift);
    } else {
        for (Index n = L + 1; n + 1 <= limit; ++n) total += std::abs(k(n) - 1.0);
    }
    if (!state_->beta_const) {
        for (Index n = L + 1; n + 1 <= limit; ++n)
            total += std::abs(state_->beta(n + 1) - state_->beta(n));
    }
    return total;
}

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::LC_candidate: return "LC_candidate";
        case Regime::LP_carleman: return "LP_carleman";
        case Regime::LP_large_beta: return "LP_large_beta";
        case Regime::critical: return "critical";
        case Regime::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

// Contribution of the final 10% of terms relative to the whole partial sum.
struct CauchyTest {
    double total = 0.0;
    double last_decade = 0.0;
    bool cauchy(double tol) const {
        return last_decade <= tol * std::max(std::abs(total), std::numeric_limits<double>::min());
    }
};

CauchyTest cauchy_test(const std::vector<double>& terms) {
    CauchyTest t;
    const Index count = terms.size();
    const Index start = count - (count + 9) / 10;
    for (Index i = 0; i < count; ++i) {
        t.total += terms[i];
        if (i >= start) t.last_decade += terms[i];
    }
    return t;
}

// Divergence witness: the last three complete dyadic block sums do not decay
// (each at least 90% of its predecessor) and stay above tol relative to the
// accumulated sum.
Verdict dyadic_divergence(const std::vector<double>& terms, double total, double tol) {
    std::vector<double> blocks;
    for (Index lo = 1; 2 * lo <= terms.size(); lo *= 2) {
        double s = 0.0;
        for (Index i = lo; i < 2 * lo; ++i) s += terms[i];
        blocks.push_back(s);
    }
    Verdict v;
    if (blocks.size() < 4) return v;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (Index i = blocks.size() - 3; i < blocks.size(); ++i)
        min_ratio = std::min(min_ratio, blocks[i] / blocks[i - 1]);
    v.value = min_ratio >= 0.9 && blocks.back() > tol * total;
    v.confidence = std::clamp(min_ratio, 0.0, 1.0);
    return v;
}

std::pair<double, double> mean_and_spread(const std::vector<double>& xs) {
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace

RegimeReport classify(const CoefficientModel& model, Index horizon, double tol) {
    if (horizon < 32) throw DomainError("classify requires horizon >= 32");
    if (!(tol > 0.0)) throw DomainError("classify requires tol > 0");
    if (auto mi = model.max_index(); mi && *mi + 1 < horizon)
        throw DomainError("tabulated model has " + std::to_string(*mi + 1) +
                          " entries, fewer than the horizon " + std::to_string(horizon));

    RegimeReport r;
    r.horizon = horizon;
    r.tol = tol;
    // alpha and k need one index past the horizon.
    const Index H = std::min(horizon, model.usable_limit() - 1);
    r.effective_horizon = H;
    if (H < horizon)
        r.notes.push_back("horizon clipped to " + std::to_string(H) + " by floating-point range");

    std::vector<double> carleman(H);
    for (Index n = 0; n < H; ++n) carleman[n] = 1.0 / model.a(n);
    const auto ct = cauchy_test(carleman);
    r.carleman_sum_partial = ct.total;
    r.carleman_last_decade = ct.last_decade;
    r.carleman_convergent.value = ct.cauchy(tol);
    r.carleman_convergent.confidence =
        std::clamp(1.0 - ct.last_decade / (tol * ct.total), 0.0, 1.0);
    r.carleman_divergent = dyadic_divergence(carleman, ct.total, tol);

    const Index window = std::max<Index>(H / 10, 2);
    std::vector<double> betas, alphas;
    for (Index n = H - window; n < H; ++n) {
        betas.push_back(model.beta(n));
        alphas.push_back(model.alpha(n));
    }
    std::tie(r.beta_inf_estimate, r.beta_spread) = mean_and_spread(betas);
    std::tie(r.alpha_inf_estimate, r.alpha_spread) = mean_and_spread(alphas);

    std::vector<double> kreg, breg;
    for (Index n = 1; n + 1 < H; ++n) {
        kreg.push_back(std::abs(model.k(n) - 1.0));
        breg.push_back(std::abs(model.beta(n + 1) - model.beta(n)));
    }
    const auto kt = cauchy_test(kreg);
    const auto bt = cauchy_test(breg);
    r.k_regularity_sum = kt.total;
    r.beta_regularity_sum = bt.total;
    r.k_regularity_cauchy = kt.cauchy(tol);
    r.beta_regularity_cauchy = bt.cauchy(tol);
    for (Index n = 0; n < H; ++n)
        if (std::abs(model.beta(n)) > 1.0) ++r.phase_skip_count;
    if (r.phase_skip_count > 0)
        r.notes.push_back(std::to_string(r.phase_skip_count) +
                          " indices with |beta_n| > 1 skipped in the phase sum");

    const double beta_abs = std::abs(r.beta_inf_estimate);
    const bool beta_stable = r.beta_spread <= tol * std::max(1.0, beta_abs);
    const bool alpha_stable = r.alpha_spread <= tol * std::max(1.0, r.alpha_inf_estimate);

    if (r.carleman_divergent.value) {
        r.classification = Regime::LP_carleman;
    } else if (beta_stable && beta_abs > 1.0 + tol) {
        r.classification = Regime::LP_large_beta;
    } else if (beta_stable && std::abs(beta_abs - 1.0) <= tol) {
        r.classification = Regime::critical;
    } else if (r.carleman_convergent.value && beta_stable && alpha_stable && beta_abs < 1.0 - tol &&
               r.k_regularity_cauchy && r.beta_regularity_cauchy) {
        r.classification = Regime::LC_candidate;
    } else {
        r.classification = Regime::inconclusive;
        if (!beta_stable) r.notes.push_back("beta_n has not stabilized");
        if (!alpha_stable) r.notes.push_back("alpha_n has not stabilized");
        if (!r.carleman_convergent.value) r.notes.push_back("Carleman partial sums not Cauchy");
    }
    return r;
}

LcModel::LcModel(CoefficientModel model, RegimeReport report)
    : model_(std::move(model)), report_(std::move(report)), asymptotics_(model_.asymptotics()) {}

LcModel LcModel::certify(CoefficientModel model, Index horizon, double tol) {
    auto report = classify(model, horizon, tol);
    if (report.classification != Regime::LC_candidate)
        throw DomainError("model " + model.label() + " is not a limit-circle candidate (classified " +
                          to_string(report.classification) + ")");
    return LcModel(std::move(model), std::move(report));
}

}  // namespace jlc
