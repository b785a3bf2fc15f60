#include "jlc/cli.hpp"

#include "jlc/error.hpp"
#include "jlc/jost.hpp"
#include "jlc/kernels.hpp"
#include "jlc/model_io.hpp"
#include "jlc/polynomials.hpp"
#include "jlc/verify.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace jlc {

namespace {

using nlohmann::json;

const char* const kCommandNames[] = {"classify", "polys", "gamma", "eigs", "measure", "moments", "jost", "verify"};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

double parse_real(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw DomainError("cannot parse " + what + " from '" + s + "'");
    }
    while (used < s.size() && s[used] == ' ') ++used;
    if (used != s.size()) throw DomainError("cannot parse " + what + " from '" + s + "'");
    return v;
}

json pair(cplx z) { return json::array({z.real(), z.imag()}); }

json record(const std::string& kind) {
    json j;
    j["schema"] = 1;
    j["record"] = kind;
    return j;
}

/// Collects output records in either format; CSV keeps a single header.
class Sink {
public:
    Sink(std::ostream& out, OutputFormat format) : out_(out), format_(format) {}

    bool csv() const { return format_ == OutputFormat::csv; }

    void emit(const json& j) {
        out_ << j.dump() << '\n';
        ++records_;
    }

    void header(const std::string& columns) {
        if (!header_written_) out_ << columns << '\n';
        header_written_ = true;
    }

    template <class... Ts>
    void row(const Ts&... values) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(values), first = false), ...);
        out_ << '\n';
        ++records_;
    }

    std::ostream& raw() { return out_; }
    void count(Index n) { records_ += n; }
    Index records() const { return records_; }

private:
    static std::string cell(double x) { return format_double(x); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    static std::string cell(Index n) { return std::to_string(n); }
    static std::string cell(int n) { return std::to_string(n); }
    static std::string cell(bool b) { return b ? "true" : "false"; }

    std::ostream& out_;
    OutputFormat format_;
    bool header_written_ = false;
    Index records_ = 0;
};

const ExtensionParamT& require_t(const RunConfig& c) {
    if (c.omega) throw DomainError("this command takes --t, not --omega");
    if (!c.t) throw DomainError("missing --t");
    return *c.t;
}

void require_one_parameter(const RunConfig& c) {
    if (c.t && c.omega) throw DomainError("give exactly one of --t and --omega");
    if (!c.t && !c.omega) throw DomainError("missing --t or --omega");
}

std::vector<cplx> z_points(const RunConfig& c) {
    return c.z_list.empty() ? std::vector<cplx>{cplx(0.0, 1.0)} : c.z_list;
}

Window window_of(const RunConfig& c) { return c.window.value_or(Window{-20.0, 20.0}); }

TruncationOptions truncation(const RunConfig& c) {
    TruncationOptions o;
    o.n_min = std::max<Index>(c.N, 8);
    return o;
}

ScanOptions scan_options(const RunConfig& c, const LcModel& model, const Window& w) {
    ScanOptions s;
    s.grid = c.grid;
    TruncationOptions o = truncation(c);
    const cplx probes[] = {cplx(0.0, 1.0), cplx(w.lo, 1.0), cplx(w.hi, 1.0)};
    s.N = choose_truncation(model, probes, o);
    return s;
}

void do_classify(const RunConfig& c, const CoefficientModel& model, Sink& sink) {
    const auto r = classify(model);
    if (sink.csv()) {
        sink.header("key,value");
        sink.row("classification", to_string(r.classification));
        sink.row("horizon", r.horizon);
        sink.row("effective_horizon", r.effective_horizon);
        sink.row("carleman_sum_partial", r.carleman_sum_partial);
        sink.row("carleman_last_decade", r.carleman_last_decade);
        sink.row("beta_inf_estimate", r.beta_inf_estimate);
        sink.row("beta_spread", r.beta_spread);
        sink.row("alpha_inf_estimate", r.alpha_inf_estimate);
        sink.row("alpha_spread", r.alpha_spread);
        sink.row("phase_skip_count", r.phase_skip_count);
        return;
    }
    (void)c;
    json j = record("classification");
    j["model"] = model.label();
    j["classification"] = to_string(r.classification);
    j["horizon"] = r.horizon;
    j["effective_horizon"] = r.effective_horizon;
    j["tol"] = r.tol;
    j["carleman_sum_partial"] = r.carleman_sum_partial;
    j["carleman_last_decade"] = r.carleman_last_decade;
    j["carleman_convergent"] = {{"value", r.carleman_convergent.value}, {"confidence", r.carleman_convergent.confidence}};
    j["carleman_divergent"] = {{"value", r.carleman_divergent.value}, {"confidence", r.carleman_divergent.confidence}};
    j["beta_inf_estimate"] = r.beta_inf_estimate;
    j["beta_spread"] = r.beta_spread;
    j["alpha_inf_estimate"] = r.alpha_inf_estimate;
    j["alpha_spread"] = r.alpha_spread;
    j["k_regularity_sum"] = r.k_regularity_sum;
    j["k_regularity_cauchy"] = r.k_regularity_cauchy;
    j["beta_regularity_sum"] = r.beta_regularity_sum;
    j["beta_regularity_cauchy"] = r.beta_regularity_cauchy;
    j["phase_skip_count"] = r.phase_skip_count;
    j["notes"] = r.notes;
    sink.emit(j);
}

void do_polys(const RunConfig& c, const CoefficientModel& model, Sink& sink) {
    const auto zs = z_points(c);
    if (sink.csv() && zs.size() != 1) throw DomainError("CSV polynomial tables take a single --z point");
    for (const cplx z : zs) {
        const auto t = eval_pq(model, z, c.N);
        if (sink.csv()) {
            write_poly_csv(sink.raw(), t);
            sink.count(t.N + 1);
            continue;
        }
        json j = record("polys");
        j["z"] = pair(z);
        j["N"] = t.N;
        j["tail_indicator"] = t.tail_indicator;
        json p = json::array(), q = json::array();
        for (Index n = 0; n <= t.N; ++n) {
            p.push_back(pair(t.p[n]));
            q.push_back(pair(t.q[n]));
        }
        j["p"] = std::move(p);
        j["q"] = std::move(q);
        sink.emit(j);
    }
}

void do_gamma(const RunConfig& c, const LcModel& model, Sink& sink) {
    require_one_parameter(c);
    const auto zs = z_points(c);
    JostOptions jo;
    jo.tol = c.tol;
    const auto to = truncation(c);
    std::vector<cplx> gammas(zs.size());
    for (Index i = 0; i < zs.size(); ++i) {
        gammas[i] = c.t ? gamma_t(inner_products(model, zs[i], to), zs[i], *c.t)
                        : gamma_omega(model, zs[i], ExtensionParamOmega::make(*c.omega), jo);
    }
    if (sink.csv()) {
        write_gamma_csv(sink.raw(), zs, gammas);
        sink.count(zs.size());
        return;
    }
    for (Index i = 0; i < zs.size(); ++i) {
        json j = record("gamma");
        if (c.t) j["t"] = c.t->to_string();
        else j["omega"] = pair(*c.omega);
        j["z"] = pair(zs[i]);
        j["gamma"] = pair(gammas[i]);
        sink.emit(j);
    }
}

void do_eigs(const RunConfig& c, const LcModel& model, Sink& sink, std::ostream& diag) {
    require_one_parameter(c);
    const Window w = window_of(c);
    Spectrum s;
    if (c.t) {
        s = eigenvalues(model, *c.t, w, scan_options(c, model, w));
    } else {
        ScanOptions so;
        so.grid = c.grid;
        JostOptions jo;
        jo.tol = c.tol;
        s = omega_eigenvalues(model, ExtensionParamOmega::make(*c.omega), w, so, jo);
    }
    for (const auto& msg : s.warnings) diag << "warning: " << msg << '\n';
    if (sink.csv()) {
        sink.header("k,lambda");
        for (Index k = 0; k < s.eigenvalues.size(); ++k) sink.row(k, s.eigenvalues[k]);
        return;
    }
    json j = record("eigenvalues");
    if (c.t) j["t"] = c.t->to_string();
    else j["omega"] = pair(*c.omega);
    j["window"] = {w.lo, w.hi};
    j["eigenvalues"] = s.eigenvalues;
    j["warnings"] = s.warnings;
    sink.emit(j);
}

void do_measure(const RunConfig& c, const LcModel& model, Sink& sink, std::ostream& diag) {
    const auto& t = require_t(c);
    const Window w = window_of(c);
    const auto m = spectral_measure(model, t, w, scan_options(c, model, w));
    for (const auto& msg : m.warnings) diag << "warning: " << msg << '\n';
    if (sink.csv()) {
        write_measure_csv(sink.raw(), m);
        sink.count(m.atoms.size());
        return;
    }
    sink.raw() << measure_json(m) << '\n';
    sink.count(1);
}

void do_moments(const RunConfig& c, const LcModel& model, Sink& sink) {
    if (c.omega) throw DomainError("moments takes --t, not --omega");
    const auto s = moments(model.model(), c.n_max, c.N);
    std::optional<SpectralMeasure> m;
    if (c.t) {
        const Window w = window_of(c);
        m = spectral_measure(model, *c.t, w, scan_options(c, model, w));
    }
    if (sink.csv()) sink.header(m ? "n,moment,measure_moment" : "n,moment");
    for (int n = 0; n <= c.n_max; ++n) {
        if (sink.csv()) {
            if (m) sink.row(n, s[n], m->moment(n));
            else sink.row(n, s[n]);
            continue;
        }
        json j = record("moment");
        j["n"] = n;
        j["value"] = s[n];
        if (m) {
            j["t"] = c.t->to_string();
            j["measure_moment"] = m->moment(n);
        }
        sink.emit(j);
    }
}

void do_jost(const RunConfig& c, const LcModel& model, Sink& sink) {
    JostOptions jo;
    jo.tol = c.tol;
    if (sink.csv())
        sink.header("re_z,im_z,n_start,wronskian_deviation,re_sigma_plus,im_sigma_plus,re_sigma_minus,im_sigma_minus,"
                    "re_tau_plus,im_tau_plus,re_tau_minus,im_tau_minus,identity_residual,band_spread");
    for (const cplx z : z_points(c)) {
        const JostData d = jost_solutions(model, z, jo);
        const PolyTable table = eval_pq(model.model(), z, interior_band(d.n_start).hi + 1);
        const ScatteringCoeffs s = scattering_coeffs(model, d, table);
        if (sink.csv()) {
            sink.row(z.real(), z.imag(), d.n_start, d.wronskian_deviation, s.sigma_plus.real(), s.sigma_plus.imag(),
                     s.sigma_minus.real(), s.sigma_minus.imag(), s.tau_plus.real(), s.tau_plus.imag(),
                     s.tau_minus.real(), s.tau_minus.imag(), s.identity_residual, s.band_spread);
            continue;
        }
        json j = record("jost");
        j["z"] = pair(z);
        j["n_start"] = d.n_start;
        j["retries"] = d.retries;
        j["wronskian_deviation"] = d.wronskian_deviation;
        j["f_plus_0"] = pair(d.f_plus[0]);
        j["f_minus_0"] = pair(d.f_minus[0]);
        j["sigma_plus"] = pair(s.sigma_plus);
        j["sigma_minus"] = pair(s.sigma_minus);
        j["tau_plus"] = pair(s.tau_plus);
        j["tau_minus"] = pair(s.tau_minus);
        j["identity_residual"] = s.identity_residual;
        j["band_spread"] = s.band_spread;
        sink.emit(j);
    }
}

bool do_verify(const RunConfig& c, const LcModel& model, Sink& sink, std::ostream& diag) {
    SuiteOptions so;
    so.N = c.N;
    so.tol = c.tol;
    so.grid = c.grid;
    if (c.window) so.window = *c.window;
    const auto results = run_identity_suite(model, so);
    bool ok = true;
    if (sink.csv()) sink.header("name,residual,tolerance,passed");
    for (const auto& r : results) {
        ok = ok && r.passed;
        diag << (r.passed ? "PASS " : "FAIL ") << r.name << "  residual " << format_double(r.residual) << "  tol "
             << format_double(r.tolerance) << (r.detail.empty() ? "" : "  (" + r.detail + ")") << '\n';
        if (sink.csv()) {
            sink.row(r.name, r.residual, r.tolerance, r.passed);
            continue;
        }
        json j = record("check");
        j["name"] = r.name;
        j["residual"] = std::isfinite(r.residual) ? json(r.residual) : json(nullptr);
        j["tolerance"] = r.tolerance;
        j["passed"] = r.passed;
        j["detail"] = r.detail;
        sink.emit(j);
    }
    return ok;
}

void write_sidecar(const RunConfig& c, const CoefficientModel& model, Index records) {
    json j;
    j["schema"] = 1;
    j["command"] = to_string(c.command);
    j["model_path"] = c.model_path;
    j["model"] = model.label();
    j["N"] = c.N;
    j["tol"] = c.tol;
    j["grid"] = c.grid;
    if (c.window) j["window"] = {c.window->lo, c.window->hi};
    if (c.t) j["t"] = c.t->to_string();
    if (c.omega) j["omega"] = pair(*c.omega);
    j["format"] = c.format == OutputFormat::csv ? "csv" : "json-lines";
    j["records"] = records;
    j["threads"] = thread_count();
    std::ofstream meta(*c.out + ".meta.json", std::ios::binary);
    meta << j.dump(2) << '\n';
}

}  // namespace

Command parse_command(const std::string& name) {
    for (int i = 0; i < 8; ++i)
        if (name == kCommandNames[i]) return static_cast<Command>(i);
    throw DomainError("unknown command '" + name + "'");
}

std::string to_string(Command c) { return kCommandNames[static_cast<int>(c)]; }

OutputFormat parse_format(const std::string& name) {
    if (name == "json-lines") return OutputFormat::json_lines;
    if (name == "csv") return OutputFormat::csv;
    throw DomainError("unknown format '" + name + "' (expected json-lines or csv)");
}

cplx parse_complex(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() == 1) return {parse_real(parts[0], "complex number"), 0.0};
    if (parts.size() != 2) throw DomainError("expected RE,IM but got '" + text + "'");
    return {parse_real(parts[0], "real part"), parse_real(parts[1], "imaginary part")};
}

std::vector<cplx> parse_z_list(const std::string& text) {
    std::vector<cplx> zs;
    for (const auto& item : split(text, ';'))
        if (!item.empty()) zs.push_back(parse_complex(item));
    if (zs.empty()) throw DomainError("empty --z list");
    return zs;
}

Window parse_window(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) throw DomainError("expected LO,HI but got '" + text + "'");
    Window w{parse_real(parts[0], "window"), parse_real(parts[1], "window")};
    if (!(w.hi > w.lo)) throw DomainError("window must satisfy LO < HI");
    return w;
}

ExtensionParamT parse_t(const std::string& text) {
    if (text == "inf" || text == "infinity") return ExtensionParamT::infinity();
    return ExtensionParamT::finite(parse_real(text, "t"));
}

int run(const RunConfig& c, std::ostream& data, std::ostream& diag) {
    try {
        if (!(c.tol > 0.0)) throw DomainError("--tol must be positive");
        if (!(c.grid > 0.0)) throw DomainError("--grid must be positive");
        const auto model = CoefficientModel::make(load_descriptor(c.model_path));
        std::ofstream file;
        if (c.out) {
            file.open(*c.out, std::ios::binary);
            if (!file) throw DomainError("cannot write " + *c.out);
        }
        Sink sink(c.out ? file : data, c.format);
        bool ok = true;
        if (c.command == Command::classify) {
            do_classify(c, model, sink);
        } else if (c.command == Command::polys) {
            do_polys(c, model, sink);
        } else {
            const auto lc = LcModel::certify(model);
            switch (c.command) {
                case Command::gamma: do_gamma(c, lc, sink); break;
                case Command::eigs: do_eigs(c, lc, sink, diag); break;
                case Command::measure: do_measure(c, lc, sink, diag); break;
                case Command::moments: do_moments(c, lc, sink); break;
                case Command::jost: do_jost(c, lc, sink); break;
                case Command::verify: ok = do_verify(c, lc, sink, diag); break;
                default: break;
            }
        }
        if (c.out) {
            file.close();
            write_sidecar(c, model, sink.records());
        }
        return ok ? 0 : 1;
    } catch (const ParseError& e) {
        diag << "parse error: " << e.what() << '\n';
    } catch (const Error& e) {
        diag << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << '\n';
    }
    return 2;
}

}  // namespace jlc
