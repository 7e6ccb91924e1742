#pragma once

// Scenario configuration (INI-style sections) and the end-to-end pipelines
// driven by the command-line tool.

#include "robineit/core.hpp"
#include "robineit/factorization.hpp"
#include "robineit/forward_bie.hpp"
#include "robineit/forward_series.hpp"
#include "robineit/music.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace reit::cli {

/// Minimal INI reader that remembers the line of every entry.
class IniDocument {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };
  struct Diagnostic {
    int line;
    std::string message;
  };

  static IniDocument parse(std::istream& in, std::vector<Diagnostic>& errors);

  const Entry* find(const std::string& section, const std::string& key) const;
  const std::map<std::string, std::map<std::string, Entry>>& sections() const { return sections_; }
  int section_line(const std::string& section) const;

 private:
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::map<std::string, int> section_lines_;
};

enum class ForwardPath { series, bie, born, asymptotic };
enum class Method { music, fm };
std::string to_string(ForwardPath p);
std::string to_string(Method m);

struct ScenarioConfig {
  std::string name;
  Method method = Method::music;
  ForwardPath forward = ForwardPath::born;

  std::string geometry_type;
  InclusionGeometry geometry = ConcentricDisc{0.5};
  RobinCoefficient gamma = RobinCoefficient::constant(1.0);

  int boundary_nodes = BoundaryGrid::kDefaultNodes;
  int inclusion_nodes = bie::kDefaultCurveNodes;
  int basis_order = 20;
  int series_truncation = 10;

  double delta = 0.0;
  std::uint64_t seed = 1;

  double rank_threshold = music::kDefaultRankThreshold;
  std::optional<int> expected_peaks;

  fm::FilterSpec filter = fm::Tikhonov{fm::kAlphaCircular};
  double level = 0.1;

  double x_min = -1.0, x_max = 1.0, y_min = -1.0, y_max = 1.0;
  double step = SamplingGrid::kDefaultStep;
  bool heatmap = true;

  std::vector<double> scaling_epsilons{0.02, 0.04, 0.08};
  int convergence_n_min = 2, convergence_n_max = 8, convergence_n_ref = 40;

  /// Every resolved setting as (key, value, "config" | "default").
  struct Echo {
    std::string key, value, source;
  };
  std::vector<Echo> echo;

  BoundaryGrid boundary_grid() const { return BoundaryGrid(boundary_nodes); }
  SamplingGrid sampling_grid() const { return SamplingGrid(x_min, x_max, y_min, y_max, step); }
  FourierBasisSet basis() const;
};

struct Diagnostic {
  std::string source;
  int line;  // 0 when the problem is not tied to one line
  std::string message;
  std::string str() const;
};

struct LoadResult {
  std::optional<ScenarioConfig> config;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return config.has_value() && diagnostics.empty(); }
};

/// Parse and validate without running any solver. Never throws on bad input.
LoadResult parse_config(std::istream& in, const std::string& source = "<config>");
LoadResult load_config(const std::filesystem::path& path);

// --- pipelines -------------------------------------------------------------------

/// Clean forward data: basis-by-node for music, nodal K x K for fm.
CurrentGapMatrix forward_data(const ScenarioConfig& cfg, Exec exec = Exec::parallel);

struct Timing {
  std::string stage;
  double seconds;
};

struct RunReport {
  std::string scenario;
  Method method;
  Eigen::VectorXd spectrum;
  // music
  int rank = -1;
  std::vector<Peak> peaks;
  // fm
  std::vector<Segment> contour;
  ContourStats contour_stats;
  std::vector<std::pair<std::string, std::string>> field_metadata;
  std::vector<Timing> timings;
  std::vector<ScenarioConfig::Echo> config;
};

struct RunResult {
  RunReport report;
  IndicatorField field;
};

RunResult run_scenario(const ScenarioConfig& cfg, Exec exec = Exec::parallel);

/// Singular values of the matrix the chosen method inverts (F for music, A^delta for fm).
Eigen::VectorXd spectrum(const ScenarioConfig& cfg);

// --- output files ------------------------------------------------------------------

/// Write through a temporary file in the same directory, then rename.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

std::string field_csv(const IndicatorField& field);
/// Rebuilds the lattice from the distinct coordinates present in the file.
IndicatorField read_field_csv(std::istream& in, double step);
std::string spectrum_csv(const Eigen::VectorXd& s);
std::string metadata_text(const RunReport& report);
std::string contour_csv(const std::vector<Segment>& contour);
std::string peaks_csv(const std::vector<Peak>& peaks);
/// 8-bit binary PGM, rows from top (largest y), values round(255 W / max W).
std::string heatmap_pgm(const IndicatorField& field);

/// Writes every artifact of a run into `dir`; returns the written paths.
std::vector<std::filesystem::path> write_run(const RunResult& result, const ScenarioConfig& cfg,
                                             const std::filesystem::path& dir);

}  // namespace reit::cli
