#include "ghf/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "ghf/pfaffian.hpp"

namespace ghf {

double parse_angle(const std::string& text) {
  const double pi = 2.0 * std::asin(1.0);
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(), ::isspace), t.end());
  double factor = 1.0;
  if (t.size() >= 2 && (t.ends_with("pi") || t.ends_with("PI"))) {
    factor = pi;
    t = t.substr(0, t.size() - 2);
    if (t.ends_with("*")) t.pop_back();
    if (t.empty()) t = "1";
  }
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse angle '" + text + "'");
  }
  if (pos != t.size()) {
    throw std::invalid_argument("cannot parse angle '" + text + "'");
  }
  return v * factor;
}

namespace {
constexpr char kMagic[4] = {'F', 'G', 'S', '1'};
}

void write_checkpoint(const std::string& path, const CovarianceMatrix& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(kMagic, 4);
  const std::uint64_t n = static_cast<std::uint64_t>(state.n_sites);
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  const int d = 2 * state.n_sites;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const double v = state.gamma(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  }
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

CovarianceMatrix read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("'" + path + "' is not a FGS1 checkpoint");
  }
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  if (!in || n == 0 || n > (1u << 20)) {
    throw std::runtime_error("'" + path + "': bad site count");
  }
  const int d = static_cast<int>(2 * n);
  Eigen::MatrixXd upper = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      double v;
      in.read(reinterpret_cast<char*>(&v), sizeof(v));
      upper(i, j) = v;
    }
  }
  if (!in) throw std::runtime_error("'" + path + "': truncated checkpoint");
  CovarianceMatrix s;
  s.n_sites = static_cast<int>(n);
  s.gamma = antisymmetrize_upper(upper);
  return s;
}

std::map<std::string, std::string> read_config(
    const std::string& path, const std::vector<std::string>& known) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
    }
    out[key] = value;
  }
  return out;
}

void write_scan_csv(const std::string& path,
                    const std::vector<ScanPoint>& points,
                    const std::map<std::string, std::string>& config,
                    bool timestamp) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "# " << version_string() << "\n";
  if (timestamp) {
    const std::time_t t = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    out << "# timestamp=" << buf << "\n";
  }
  for (const auto& [k, v] : config) out << "# " << k << "=" << v << "\n";
  out << "# entropy_unit=nats\n";
  out << "n,alpha,theta,energy,entropy,method,converged,seed\n";
  out << std::setprecision(17);
  for (const auto& p : points) {
    out << p.n << ",";
    if (p.nearest_neighbour) {
      out << "inf";
    } else {
      out << p.alpha;
    }
    out << "," << p.theta << "," << p.energy << "," << p.entropy << ","
        << method_name(p.method) << "," << (p.converged ? 1 : 0) << ","
        << p.seed << "\n";
  }
}

void write_trace_csv(const std::string& path,
                     const std::vector<double>& energies) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "iteration,energy\n" << std::setprecision(17);
  for (std::size_t i = 0; i < energies.size(); ++i) {
    out << i << "," << energies[i] << "\n";
  }
}

namespace {

constexpr int kW = 640, kH = 480, kMargin = 60;

struct Range {
  double lo, hi;
  double map(double v, double a, double b) const {
    return hi == lo ? 0.5 * (a + b) : a + (v - lo) / (hi - lo) * (b - a);
  }
};

Range span(const std::vector<double>& v) {
  Range r{v.empty() ? 0.0 : v.front(), v.empty() ? 1.0 : v.front()};
  for (double x : v) {
    r.lo = std::min(r.lo, x);
    r.hi = std::max(r.hi, x);
  }
  if (r.lo == r.hi) {
    r.lo -= 0.5;
    r.hi += 0.5;
  }
  return r;
}

void svg_header(std::ostream& out) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void svg_axes(std::ostream& out, const std::string& x_label,
              const std::string& y_label, const Range& rx, const Range& ry) {
  out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
      << kW - 2 * kMargin << "\" height=\"" << kH - 2 * kMargin
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << std::setprecision(4);
  out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12
      << "\" text-anchor=\"middle\" font-size=\"14\">" << x_label
      << "</text>\n";
  out << "<text x=\"14\" y=\"" << kH / 2
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 "
         "14 "
      << kH / 2 << ")\">" << y_label << "</text>\n";
  out << "<text x=\"" << kMargin << "\" y=\"" << kH - kMargin + 18
      << "\" font-size=\"11\">" << rx.lo << "</text>\n";
  out << "<text x=\"" << kW - kMargin << "\" y=\"" << kH - kMargin + 18
      << "\" text-anchor=\"end\" font-size=\"11\">" << rx.hi << "</text>\n";
  out << "<text x=\"" << kMargin - 4 << "\" y=\"" << kH - kMargin
      << "\" text-anchor=\"end\" font-size=\"11\">" << ry.lo << "</text>\n";
  out << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 6
      << "\" text-anchor=\"end\" font-size=\"11\">" << ry.hi << "</text>\n";
}

}  // namespace

void write_line_svg(const std::string& path,
                    const std::vector<SvgSeries>& series,
                    const std::string& x_label, const std::string& y_label) {
  std::vector<double> all_x, all_y;
  for (const auto& s : series) {
    all_x.insert(all_x.end(), s.x.begin(), s.x.end());
    all_y.insert(all_y.end(), s.y.begin(), s.y.end());
  }
  const Range rx = span(all_x), ry = span(all_y);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  svg_header(out);
  svg_axes(out, x_label, y_label, rx, ry);
  out << std::setprecision(6);
  for (const auto& s : series) {
    auto px = [&](double v) { return rx.map(v, kMargin, kW - kMargin); };
    auto py = [&](double v) { return ry.map(v, kH - kMargin, kMargin); };
    if (!s.markers_only && s.x.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color
          << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        out << px(s.x[i]) << "," << py(s.y[i]) << " ";
      }
      out << "\"/>\n";
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i])
          << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
    }
  }
  out << "</svg>\n";
}

void write_heatmap_svg(const std::string& path, const std::vector<double>& xs,
                       const std::vector<double>& ys,
                       const std::vector<double>& values,
                       const std::string& x_label, const std::string& y_label,
                       const std::vector<std::pair<double, double>>& overlay) {
  const std::size_t nx = xs.size(), ny = ys.size();
  if (values.size() != nx * ny) {
    throw std::invalid_argument("write_heatmap_svg: grid size mismatch");
  }
  double vmin = values[0], vmax = values[0];
  for (double v : values) {
    if (std::isfinite(v)) {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  if (vmax == vmin) vmax = vmin + 1.0;
  const Range rx = span(xs), ry = span(ys);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  svg_header(out);
  out << std::setprecision(6);
  const double cw = static_cast<double>(kW - 2 * kMargin) / nx;
  const double ch = static_cast<double>(kH - 2 * kMargin) / ny;
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double v = values[iy * nx + ix];
      double t = std::isfinite(v) ? (v - vmin) / (vmax - vmin) : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      // dark blue -> yellow
      const int r = static_cast<int>(255 * t);
      const int g = static_cast<int>(60 + 180 * t);
      const int b = static_cast<int>(120 * (1.0 - t) + 40);
      out << "<rect x=\"" << kMargin + ix * cw << "\" y=\""
          << kH - kMargin - (iy + 1) * ch << "\" width=\"" << cw + 0.5
          << "\" height=\"" << ch + 0.5 << "\" fill=\"rgb(" << r << "," << g
          << "," << b << ")\"/>\n";
    }
  }
  svg_axes(out, x_label, y_label, rx, ry);
  for (const auto& [ox, oy] : overlay) {
    out << "<rect x=\"" << rx.map(ox, kMargin, kW - kMargin) - 4 << "\" y=\""
        << ry.map(oy, kH - kMargin, kMargin) - 4
        << "\" width=\"8\" height=\"8\" fill=\"black\"/>\n";
  }
  out << "</svg>\n";
}

std::string version_string() {
#ifdef GHF_GIT_REV
  return std::string("ghf ") + GHF_VERSION + " (" + GHF_GIT_REV + ")";
#else
  return std::string("ghf ") + GHF_VERSION;
#endif
}

}  // namespace ghf
