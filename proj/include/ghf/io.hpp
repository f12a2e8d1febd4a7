#pragma once

#include <map>
#include <string>
#include <vector>

#include "ghf/gaussian.hpp"
#include "ghf/scaling.hpp"

namespace ghf {

// --- angles -----------------------------------------------------------

// Parses "0.3pi" / "0.3*pi" as multiples of pi, otherwise radians.
double parse_angle(const std::string& text);

// --- covariance checkpoints ------------------------------------------
// Binary format: magic "FGS1", little-endian uint64 N, then the strict
// upper triangle of the 2N x 2N matrix, row-major doubles.

void write_checkpoint(const std::string& path, const CovarianceMatrix& state);
CovarianceMatrix read_checkpoint(const std::string& path);

// --- flat key=value config -------------------------------------------

// Lines of "key = value"; '#' starts a comment. Keys not in `known` are
// rejected.
std::map<std::string, std::string> read_config(
    const std::string& path, const std::vector<std::string>& known);

// --- CSV --------------------------------------------------------------

// Stable schema: n,alpha,theta,energy,entropy,method,converged,seed.
// Config entries are embedded as '# key=value' comment lines; the
// timestamp line is optional so reruns can be byte-identical.
void write_scan_csv(const std::string& path,
                    const std::vector<ScanPoint>& points,
                    const std::map<std::string, std::string>& config,
                    bool timestamp);

void write_trace_csv(const std::string& path,
                     const std::vector<double>& energies);

// --- minimal SVG plots ------------------------------------------------

struct SvgSeries {
  std::vector<double> x, y;
  std::string color = "#1f6fb4";
  bool markers_only = false;
};

void write_line_svg(const std::string& path,
                    const std::vector<SvgSeries>& series,
                    const std::string& x_label, const std::string& y_label);

// Heat map over a rectangular grid; values in row-major order
// (ny rows by nx columns).
void write_heatmap_svg(const std::string& path, const std::vector<double>& xs,
                       const std::vector<double>& ys,
                       const std::vector<double>& values,
                       const std::string& x_label, const std::string& y_label,
                       const std::vector<std::pair<double, double>>& overlay =
                           {});

std::string version_string();

}  // namespace ghf
