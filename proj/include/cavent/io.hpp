#pragma once

// Diff-stable emitters for results: 12-significant-digit floats with '.'
// decimal separator and no locale, sorted-key JSON, grid CSV and a minimal
// SVG heatmap for the sweep grids.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "cavent/analysis.hpp"

namespace cavent::io {

/// Shortest-of-12-significant-digits representation; round trips through
/// parse + re-emit byte-identically.
std::string format_sig(double value);

/// Serialize with sorted keys, 2-space indent and format_sig for floats.
std::string dump_json(const nlohmann::json& value);

/// Header `pi,k,p_g,p_s1,p_s2,p_oprime2,script_c,concurrence`, one row per
/// grid point, K-major then Pi.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

/// Header `t,<slot labels...>`, one row per sampled time.
void write_evolve_csv(std::ostream& out, const std::vector<std::string>& labels,
                      const std::vector<double>& times,
                      const std::vector<Eigen::VectorXd>& states);

enum class SweepField { ScriptC, Ps1, Concurrence };

void write_svg_heatmap(std::ostream& out, const SweepResult& result,
                       SweepField field, const std::string& title);

}  // namespace cavent::io
