#include "jlc/model_io.hpp"

#include "jlc/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace jlc {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, 0, "", "cannot open file");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

/// Line of the first occurrence of "key" in the document (0 if absent).
std::size_t line_of_key(const std::string& text, const std::string& key) {
    const auto pos = text.find('"' + key + '"');
    return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = first + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

class DescriptorReader {
public:
    DescriptorReader(const std::string& text, std::string file, std::string base)
        : text_(text), file_(std::move(file)), base_(std::move(base)) {}

    [[noreturn]] void fail(const std::string& field, const std::string& message) const {
        throw ParseError(file_, line_of_key(text_, field), field, message);
    }

    double number(const json& obj, const std::string& key, std::optional<double> fallback = {}) const {
        if (!obj.contains(key)) {
            if (fallback) return *fallback;
            fail(key, "missing required number");
        }
        const auto& v = obj.at(key);
        if (!v.is_number()) fail(key, "expected a number");
        return v.get<double>();
    }

    std::string string(const json& obj, const std::string& key) const {
        if (!obj.contains(key)) fail(key, "missing required string");
        const auto& v = obj.at(key);
        if (!v.is_string()) fail(key, "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> table(const json& obj, const std::string& key) const {
        const auto path = std::filesystem::path(base_) / string(obj, key);
        return load_table(path.string());
    }

    ModelDescriptor read() const {
        json doc;
        try {
            doc = json::parse(text_);
        } catch (const json::parse_error& e) {
            throw ParseError(file_, line_of_offset(text_, e.byte > 0 ? e.byte - 1 : 0), "", "malformed JSON");
        }
        if (!doc.is_object()) throw ParseError(file_, 1, "", "descriptor must be a JSON object");
        ModelDescriptor d;
        if (doc.contains("name")) d.name = string(doc, "name");
        const std::string kind = string(doc, "kind");
        if (kind == "power") {
            PowerLaw a;
            a.p = number(doc, "p");
            const double shift = number(doc, "shift", 1.0);
            if (shift != std::floor(shift) || shift < 1.0) fail("shift", "expected an integer >= 1");
            a.shift = static_cast<int>(shift);
            if (!(a.p > 0.0)) fail("p", "expected p > 0");
            d.a = a;
        } else if (kind == "geometric") {
            Geometric a;
            a.x = number(doc, "x");
            if (!(a.x > 1.0)) fail("x", "expected x > 1");
            d.a = a;
        } else if (kind == "custom") {
            d.a = Tabulated{table(doc, "table")};
        } else {
            fail("kind", "unknown kind '" + kind + "' (expected power, geometric or custom)");
        }
        if (doc.contains("b_spec")) {
            const auto& b = doc.at("b_spec");
            const std::string bkind = b.is_string() ? b.get<std::string>()
                                      : b.is_object() ? string(b, "kind")
                                                      : (fail("b_spec", "expected a string or object"), "");
            if (bkind == "zero") {
                d.b = ZeroDiagonal{};
            } else if (bkind == "constant_beta") {
                if (!b.is_object()) fail("b_spec", "constant_beta needs a beta value");
                d.b = ConstantBeta{number(b, "beta")};
            } else if (bkind == "tabulated") {
                if (!b.is_object()) fail("b_spec", "tabulated needs a table path");
                d.b = Tabulated{table(b, "table")};
            } else {
                fail("b_spec", "unknown diagonal '" + bkind + "' (expected zero, constant_beta or tabulated)");
            }
        }
        return d;
    }

private:
    const std::string& text_;
    std::string file_;
    std::string base_;
};

}  // namespace

ModelDescriptor parse_descriptor(const std::string& text, const std::string& file_name, const std::string& base_dir) {
    return DescriptorReader(text, file_name, base_dir).read();
}

ModelDescriptor load_descriptor(const std::string& path) {
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_descriptor(read_file(path), path, dir.empty() ? "." : dir.string());
}

std::vector<double> parse_table(const std::string& text, const std::string& file_name) {
    std::vector<double> values;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError(file_name, line_no, "", "expected two columns index,value");
        const std::string idx = trim(line.substr(0, comma));
        const std::string val = trim(line.substr(comma + 1));
        if (val.find(',') != std::string::npos) throw ParseError(file_name, line_no, "", "expected exactly two columns");
        double index = 0.0, value = 0.0;
        const bool idx_ok = parse_number(idx, index);
        if (!seen_data && !idx_ok) continue;  // header row
        seen_data = true;
        if (!idx_ok || index != std::floor(index) || index < 0.0)
            throw ParseError(file_name, line_no, "index", "expected a non-negative integer, got '" + idx + "'");
        if (static_cast<std::size_t>(index) != values.size())
            throw ParseError(file_name, line_no, "index",
                             "expected index " + std::to_string(values.size()) + ", got '" + idx + "'");
        if (!parse_number(val, value) || !std::isfinite(value))
            throw ParseError(file_name, line_no, "value", "expected a finite number, got '" + val + "'");
        values.push_back(value);
    }
    if (values.empty()) throw ParseError(file_name, line_no, "", "table has no data rows");
    return values;
}

std::vector<double> load_table(const std::string& path) { return parse_table(read_file(path), path); }

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

void write_poly_csv(std::ostream& out, const PolyTable& t, bool header) {
    if (header) out << "n,re_p,im_p,re_q,im_q\n";
    for (Index n = 0; n <= t.N; ++n)
        out << n << ',' << format_double(t.p[n].real()) << ',' << format_double(t.p[n].imag()) << ','
            << format_double(t.q[n].real()) << ',' << format_double(t.q[n].imag()) << '\n';
}

void write_gamma_csv(std::ostream& out, const std::vector<cplx>& zs, const std::vector<cplx>& gammas, bool header) {
    if (zs.size() != gammas.size()) throw DomainError("write_gamma_csv: size mismatch");
    if (header) out << "re_z,im_z,re_gamma,im_gamma\n";
    for (Index i = 0; i < zs.size(); ++i)
        out << format_double(zs[i].real()) << ',' << format_double(zs[i].imag()) << ','
            << format_double(gammas[i].real()) << ',' << format_double(gammas[i].imag()) << '\n';
}

void write_measure_csv(std::ostream& out, const SpectralMeasure& m, bool header) {
    if (header) out << "lambda,mass,residual,residue_mass,deviation\n";
    for (const auto& a : m.atoms)
        out << format_double(a.lambda) << ',' << format_double(a.mass) << ',' << format_double(a.residual) << ','
            << format_double(a.residue_mass) << ',' << format_double(a.deviation) << '\n';
}

void write_jost_csv(std::ostream& out, const JostData& d, bool header) {
    if (header) out << "n,re_fplus,im_fplus,re_fminus,im_fminus\n";
    for (Index n = 0; n < d.f_plus.size(); ++n)
        out << n << ',' << format_double(d.f_plus[n].real()) << ',' << format_double(d.f_plus[n].imag()) << ','
            << format_double(d.f_minus[n].real()) << ',' << format_double(d.f_minus[n].imag()) << '\n';
}

std::string measure_json(const SpectralMeasure& m) {
    json j;
    j["schema"] = 1;
    j["t"] = m.t.to_string();
    j["window"] = {m.window.lo, m.window.hi};
    j["atoms"] = json::array();
    for (const auto& a : m.atoms)
        j["atoms"].push_back({{"lambda", a.lambda}, {"mass", a.mass}, {"residual", a.residual}});
    return j.dump();
}

}  // namespace jlc
