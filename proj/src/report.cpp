#include "robineit/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace reit::cli {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot rename into " + path.string());
  }
}

std::string field_csv(const IndicatorField& field) {
  std::string s = "x,y,W\n";
  const auto& g = field.grid;
  for (int f : g.valid_indices()) {
    const Point p = g.point(f % g.nx(), f / g.nx());
    s += num(p.x) + ',' + num(p.y) + ',' + num(field.values[f]) + '\n';
  }
  return s;
}

IndicatorField read_field_csv(std::istream& in, double step) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,y,W", 0) != 0)
    throw DomainError("field CSV must start with the header x,y,W");
  std::vector<std::array<double, 3>> rows;
  std::set<double> xs, ys;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<double, 3> r{};
    std::stringstream ss(line);
    std::string cell;
    for (int c = 0; c < 3; ++c) {
      if (!std::getline(ss, cell, ','))
        throw DomainError("field CSV line " + std::to_string(line_no) + " has fewer than 3 columns");
      r[c] = std::stod(cell);
    }
    rows.push_back(r);
    xs.insert(r[0]);
    ys.insert(r[1]);
  }
  if (rows.empty()) throw DomainError("field CSV has no data rows");
  IndicatorField field{SamplingGrid::from_axes({xs.begin(), xs.end()}, {ys.begin(), ys.end()}, step),
                       {}, "csv", {}};
  const auto& g = field.grid;
  field.values.assign(g.lattice_size(), std::numeric_limits<double>::quiet_NaN());
  const std::vector<double> ax(xs.begin(), xs.end()), ay(ys.begin(), ys.end());
  for (const auto& r : rows) {
    const int i = static_cast<int>(std::lower_bound(ax.begin(), ax.end(), r[0]) - ax.begin());
    const int j = static_cast<int>(std::lower_bound(ay.begin(), ay.end(), r[1]) - ay.begin());
    field.values[g.flat(i, j)] = r[2];
  }
  return field;
}

std::string spectrum_csv(const Eigen::VectorXd& s) {
  std::string out = "j,sigma\n";
  for (Eigen::Index j = 0; j < s.size(); ++j) out += std::to_string(j + 1) + ',' + num(s(j)) + '\n';
  return out;
}

std::string metadata_text(const RunReport& r) {
  std::ostringstream s;
  s << "scenario=" << r.scenario << '\n' << "method=" << to_string(r.method) << '\n';
  s << "spectrum_size=" << r.spectrum.size() << '\n';
  if (r.method == Method::music) {
    s << "rank=" << r.rank << '\n' << "peaks=" << r.peaks.size() << '\n';
    for (size_t k = 0; k < r.peaks.size(); ++k)
      s << "peak." << k + 1 << '=' << num(r.peaks[k].location.x) << ','
        << num(r.peaks[k].location.y) << ',' << num(r.peaks[k].value) << '\n';
  } else {
    s << "contour_segments=" << r.contour.size() << '\n'
      << "contour_points=" << r.contour_stats.points << '\n'
      << "contour_mean_radius=" << num(r.contour_stats.mean_radius) << '\n'
      << "contour_radial_std=" << num(r.contour_stats.radial_std) << '\n';
  }
  for (const auto& [k, v] : r.field_metadata) s << "field." << k << '=' << v << '\n';
  for (const auto& t : r.timings) s << "time." << t.stage << '=' << num(t.seconds) << '\n';
  for (const auto& e : r.config) s << "config." << e.key << '=' << e.value << " (" << e.source << ")\n";
  return s.str();
}

std::string contour_csv(const std::vector<Segment>& contour) {
  std::string s = "x1,y1,x2,y2\n";
  for (const auto& seg : contour)
    s += num(seg.a.x) + ',' + num(seg.a.y) + ',' + num(seg.b.x) + ',' + num(seg.b.y) + '\n';
  return s;
}

std::string peaks_csv(const std::vector<Peak>& peaks) {
  std::string s = "x,y,W\n";
  for (const auto& p : peaks) s += num(p.location.x) + ',' + num(p.location.y) + ',' + num(p.value) + '\n';
  return s;
}

std::string heatmap_pgm(const IndicatorField& field) {
  const auto& g = field.grid;
  const double top = field.max();
  std::string s = "P5\n" + std::to_string(g.nx()) + ' ' + std::to_string(g.ny()) + "\n255\n";
  for (int j = g.ny() - 1; j >= 0; --j)
    for (int i = 0; i < g.nx(); ++i) {
      const double w = field.at(i, j);
      long v = 0;
      if (std::isfinite(w) && top > 0.0) v = std::lround(255.0 * std::clamp(w / top, 0.0, 1.0));
      s.push_back(static_cast<char>(static_cast<unsigned char>(v)));
    }
  return s;
}

std::vector<std::filesystem::path> write_run(const RunResult& result, const ScenarioConfig& cfg,
                                             const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& contents) {
    write_atomic(dir / name, contents);
    written.push_back(dir / name);
  };
  put("field.csv", field_csv(result.field));
  put("spectrum.csv", spectrum_csv(result.report.spectrum));
  if (cfg.method == Method::music) put("peaks.csv", peaks_csv(result.report.peaks));
  else put("contour.csv", contour_csv(result.report.contour));
  if (cfg.heatmap) put("heatmap.pgm", heatmap_pgm(result.field));
  put("metadata.txt", metadata_text(result.report));
  return written;
}

}  // namespace reit::cli
