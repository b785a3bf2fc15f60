#pragma once

/// \file cli.hpp
/// \brief The command-line front end as a library call.

#include "jlc/coefficients.hpp"
#include "jlc/extensions.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace jlc {

enum class Command { classify, polys, gamma, eigs, measure, moments, jost, verify };
enum class OutputFormat { json_lines, csv };

Command parse_command(const std::string& name);
std::string to_string(Command c);
OutputFormat parse_format(const std::string& name);

/// "RE,IM;RE,IM;..." (a bare "RE" means RE + 0i).
std::vector<cplx> parse_z_list(const std::string& text);
/// "LO,HI"
Window parse_window(const std::string& text);
/// "VAL" or "inf"
ExtensionParamT parse_t(const std::string& text);
/// "RE,IM"
cplx parse_complex(const std::string& text);

struct RunConfig {
    std::string model_path;
    Command command = Command::classify;
    std::vector<cplx> z_list;
    std::optional<Window> window;
    std::optional<ExtensionParamT> t;
    std::optional<cplx> omega;
    Index N = 400;
    double tol = 1e-8;
    double grid = 0.05;
    int n_max = 6;
    std::optional<std::string> out;
    OutputFormat format = OutputFormat::json_lines;
};

/// Runs one command. Data goes to config.out (or `data` when absent), run
/// metadata to "<out>.meta.json", messages to `diag`. Returns the exit status.
int run(const RunConfig& config, std::ostream& data, std::ostream& diag);

}  // namespace jlc
