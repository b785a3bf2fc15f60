#pragma once

/// \file model_io.hpp
/// \brief Model descriptor files and plot-ready exports.
///
/// Descriptor (JSON):
///
///   { "name": "A", "kind": "power", "p": 2, "shift": 1, "b_spec": "zero" }
///   { "kind": "geometric", "x": 2 }
///   { "kind": "custom", "table": "a.csv",
///     "b_spec": { "kind": "tabulated", "table": "b.csv" } }
///   "b_spec": { "kind": "constant_beta", "beta": 0.5 }
///
/// Table paths are resolved against the descriptor's directory. Tables are
/// two-column CSV (index,value) with an optional header row; indices must run
/// 0, 1, 2, ... without gaps.

#include "jlc/coefficients.hpp"
#include "jlc/extensions.hpp"
#include "jlc/jost.hpp"
#include "jlc/polynomials.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace jlc {

/// Throws ParseError naming file, line and field.
ModelDescriptor parse_descriptor(const std::string& text, const std::string& file_name = "<descriptor>",
                                 const std::string& base_dir = ".");
ModelDescriptor load_descriptor(const std::string& path);

std::vector<double> parse_table(const std::string& text, const std::string& file_name = "<table>");
std::vector<double> load_table(const std::string& path);

/// Shortest round-trip decimal form of x ("inf", "-inf", "nan" for non-finite
/// values; both zeros print as "0").
std::string format_double(double x);

/// n,re_p,im_p,re_q,im_q
void write_poly_csv(std::ostream& out, const PolyTable& table, bool header = true);
/// re_z,im_z,re_gamma,im_gamma
void write_gamma_csv(std::ostream& out, const std::vector<cplx>& zs, const std::vector<cplx>& gammas,
                     bool header = true);
/// lambda,mass,residual,residue_mass,deviation
void write_measure_csv(std::ostream& out, const SpectralMeasure& m, bool header = true);
/// n,re_fplus,im_fplus,re_fminus,im_fminus
void write_jost_csv(std::ostream& out, const JostData& d, bool header = true);

/// {"t", "window", "atoms": [{"lambda", "mass", "residual"}]} as one JSON line.
std::string measure_json(const SpectralMeasure& m);

}  // namespace jlc
