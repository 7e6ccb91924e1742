#include "robineit/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace reit::cli {

// --- INI -------------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string strip_comment(const std::string& line) {
  // '#' or ';' starts a comment at the line start or after whitespace.
  for (size_t i = 0; i < line.size(); ++i)
    if ((line[i] == '#' || line[i] == ';') && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t'))
      return line.substr(0, i);
  return line;
}

}  // namespace

IniDocument IniDocument::parse(std::istream& in, std::vector<Diagnostic>& errors) {
  IniDocument doc;
  std::string raw, section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back({line_no, "unterminated section header"});
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (doc.section_lines_.count(section))
        errors.push_back({line_no, "duplicate section [" + section + "]"});
      doc.section_lines_.emplace(section, line_no);
      doc.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back({line_no, "expected 'key = value'"});
      continue;
    }
    if (section.empty()) {
      errors.push_back({line_no, "entry outside of any section"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      errors.push_back({line_no, "empty key"});
      continue;
    }
    auto& sec = doc.sections_[section];
    if (sec.count(key)) errors.push_back({line_no, "duplicate key '" + key + "'"});
    sec[key] = {trim(line.substr(eq + 1)), line_no};
  }
  return doc;
}

const IniDocument::Entry* IniDocument::find(const std::string& section,
                                            const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

int IniDocument::section_line(const std::string& section) const {
  const auto it = section_lines_.find(section);
  return it == section_lines_.end() ? 0 : it->second;
}

std::string to_string(ForwardPath p) {
  switch (p) {
    case ForwardPath::series: return "series";
    case ForwardPath::bie: return "bie";
    case ForwardPath::born: return "born";
    case ForwardPath::asymptotic: return "asymptotic";
  }
  return "unknown";
}

std::string to_string(Method m) { return m == Method::music ? "music" : "fm"; }

std::string Diagnostic::str() const {
  std::ostringstream s;
  s << source;
  if (line > 0) s << ':' << line;
  s << ": " << message;
  return s.str();
}

FourierBasisSet ScenarioConfig::basis() const {
  return method == Method::music ? FourierBasisSet::music(basis_order)
                                 : FourierBasisSet::symmetric(basis_order);
}

// --- config reader ----------------------------------------------------------------

namespace {

const std::set<std::string> kSections{"scenario", "geometry", "gamma",  "discretization",
                                      "noise",    "music",    "fm",     "sampling",
                                      "output",   "scaling",  "convergence"};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Reader {
 public:
  Reader(const IniDocument& doc, std::string source, std::vector<Diagnostic>& diags,
         std::vector<ScenarioConfig::Echo>& echo)
      : doc_(doc), source_(std::move(source)), diags_(diags), echo_(echo) {}

  void error(int line, const std::string& msg) { diags_.push_back({source_, line, msg}); }
  int line_of(const std::string& sec, const std::string& key) const {
    const auto* e = doc_.find(sec, key);
    return e ? e->line : doc_.section_line(sec);
  }

  const IniDocument::Entry* raw(const std::string& sec, const std::string& key) {
    used_.insert(sec + "." + key);
    return doc_.find(sec, key);
  }

  std::optional<std::string> text(const std::string& sec, const std::string& key,
                                  std::optional<std::string> fallback = {}) {
    if (const auto* e = raw(sec, key)) {
      echo_.push_back({sec + "." + key, e->value, "config"});
      return e->value;
    }
    if (fallback) echo_.push_back({sec + "." + key, *fallback, "default"});
    return fallback;
  }

  double number(const std::string& sec, const std::string& key, double fallback) {
    const auto* e = raw(sec, key);
    if (!e) {
      echo_.push_back({sec + "." + key, fmt(fallback), "default"});
      return fallback;
    }
    try {
      size_t pos = 0;
      const double v = std::stod(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("trailing");
      echo_.push_back({sec + "." + key, e->value, "config"});
      return v;
    } catch (const std::exception&) {
      error(e->line, key + ": expected a number, got '" + e->value + "'");
      return fallback;
    }
  }

  std::optional<double> optional_number(const std::string& sec, const std::string& key) {
    if (!doc_.find(sec, key)) {
      used_.insert(sec + "." + key);
      return std::nullopt;
    }
    return number(sec, key, 0.0);
  }

  long integer(const std::string& sec, const std::string& key, long fallback) {
    const auto* e = raw(sec, key);
    if (!e) {
      echo_.push_back({sec + "." + key, std::to_string(fallback), "default"});
      return fallback;
    }
    try {
      size_t pos = 0;
      const long v = std::stol(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("trailing");
      echo_.push_back({sec + "." + key, e->value, "config"});
      return v;
    } catch (const std::exception&) {
      error(e->line, key + ": expected an integer, got '" + e->value + "'");
      return fallback;
    }
  }

  std::vector<double> list(const std::string& sec, const std::string& key, char sep,
                           std::vector<double> fallback) {
    const auto* e = raw(sec, key);
    if (!e) {
      std::string s;
      for (size_t i = 0; i < fallback.size(); ++i) s += (i ? "," : "") + fmt(fallback[i]);
      echo_.push_back({sec + "." + key, s, "default"});
      return fallback;
    }
    std::vector<double> out;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, sep)) {
      item = trim(item);
      try {
        size_t pos = 0;
        out.push_back(std::stod(item, &pos));
        if (pos != item.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        error(e->line, key + ": bad list element '" + item + "'");
        return fallback;
      }
    }
    echo_.push_back({sec + "." + key, e->value, "config"});
    return out;
  }

  void check_unknown() {
    for (const auto& [sec, entries] : doc_.sections()) {
      if (!kSections.count(sec)) {
        error(doc_.section_line(sec), "unknown section [" + sec + "]");
        continue;
      }
      for (const auto& [key, entry] : entries)
        if (!used_.count(sec + "." + key)) error(entry.line, "unknown key '" + key + "' in [" + sec + "]");
    }
  }

 private:
  const IniDocument& doc_;
  std::string source_;
  std::vector<Diagnostic>& diags_;
  std::vector<ScenarioConfig::Echo>& echo_;
  std::set<std::string> used_;
};

std::optional<std::vector<Point>> parse_centers(const std::string& s) {
  std::vector<Point> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    std::stringstream ps(item);
    std::string xs, ys, extra;
    if (!std::getline(ps, xs, ',') || !std::getline(ps, ys, ',') || std::getline(ps, extra, ','))
      return std::nullopt;
    try {
      out.push_back({std::stod(trim(xs)), std::stod(trim(ys))});
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (out.empty()) return std::nullopt;
  return out;
}

}  // namespace

LoadResult parse_config(std::istream& in, const std::string& source) {
  LoadResult result;
  auto& diags = result.diagnostics;
  std::vector<IniDocument::Diagnostic> syntax;
  const IniDocument doc = IniDocument::parse(in, syntax);
  for (const auto& d : syntax) diags.push_back({source, d.line, d.message});

  ScenarioConfig cfg;
  Reader rd(doc, source, diags, cfg.echo);

  // [scenario]
  if (auto name = rd.text("scenario", "name")) cfg.name = *name;
  else rd.error(rd.line_of("scenario", "name"), "missing required key scenario.name");

  const auto method = rd.text("scenario", "method");
  if (!method) rd.error(rd.line_of("scenario", "method"), "missing required key scenario.method (music | fm)");
  else if (*method == "music") cfg.method = Method::music;
  else if (*method == "fm") cfg.method = Method::fm;
  else rd.error(rd.line_of("scenario", "method"), "method must be 'music' or 'fm'");

  // [geometry]
  const int geo_line = rd.line_of("geometry", "type");
  size_t components = 1;
  const auto gtype = rd.text("geometry", "type");
  if (!gtype) {
    rd.error(geo_line, "missing required key geometry.type (concentric_disc | star | small_discs)");
  } else {
    cfg.geometry_type = *gtype;
    if (*gtype == "concentric_disc") {
      cfg.geometry = ConcentricDisc{rd.number("geometry", "radius", 0.5)};
    } else if (*gtype == "star") {
      const auto preset = rd.text("geometry", "preset");
      double r0 = 0.25, amp = 0.15;
      long freq = 3;
      if (preset && *preset == "star") {
        r0 = 0.5;
        freq = 5;
      } else if (preset && *preset != "acorn") {
        rd.error(rd.line_of("geometry", "preset"), "preset must be 'acorn' or 'star'");
      }
      r0 = rd.number("geometry", "r0", r0);
      amp = rd.number("geometry", "amplitude", amp);
      freq = rd.integer("geometry", "frequency", freq);
      cfg.geometry = StarShaped::cosine(r0, amp, static_cast<int>(freq), preset.value_or("star"));
    } else if (*gtype == "small_discs") {
      SmallDiscs discs;
      discs.epsilon = rd.number("geometry", "epsilon", 0.01);
      const auto centers_text = rd.text("geometry", "centers");
      std::optional<std::vector<Point>> centers;
      if (!centers_text) rd.error(geo_line, "small_discs needs geometry.centers = x,y; x,y; ...");
      else if (!(centers = parse_centers(*centers_text)))
        rd.error(rd.line_of("geometry", "centers"), "centers must look like 'x,y; x,y'");
      if (centers) {
        const auto radii = rd.list("geometry", "shape_radii", ',',
                                   std::vector<double>(centers->size(), 1.0));
        if (radii.size() != centers->size())
          rd.error(rd.line_of("geometry", "shape_radii"), "one shape radius per centre is required");
        for (size_t j = 0; j < centers->size(); ++j)
          discs.components.push_back({(*centers)[j], j < radii.size() ? radii[j] : 1.0});
        components = centers->size();
      }
      cfg.geometry = discs;
    } else {
      rd.error(geo_line, "geometry.type must be concentric_disc, star or small_discs");
    }
    try {
      validate(cfg.geometry);
    } catch (const DomainError& e) {
      rd.error(geo_line, e.what());
    }
  }
  const bool is_discs = std::holds_alternative<SmallDiscs>(cfg.geometry);
  const bool is_concentric = std::holds_alternative<ConcentricDisc>(cfg.geometry);

  // [gamma]
  const int gamma_line = rd.line_of("gamma", "type");
  const auto gkind = rd.text("gamma", "type", std::string("constant"));
  if (*gkind == "constant") {
    cfg.gamma = RobinCoefficient::constant(rd.number("gamma", "value", 1.0));
  } else if (*gkind == "paper_gamma") {
    cfg.gamma = RobinCoefficient::inverse_exp_cos();
  } else if (*gkind == "tabulated") {
    auto values = rd.list("gamma", "values", ',', {});
    if (values.empty()) rd.error(gamma_line, "tabulated gamma needs gamma.values");
    else cfg.gamma = RobinCoefficient::tabulated(std::move(values));
  } else {
    rd.error(gamma_line, "gamma.type must be constant, paper_gamma or tabulated");
  }
  if (!(cfg.gamma.min() > 0.0))
    rd.error(rd.line_of("gamma", cfg.gamma.is_constant() ? "value" : "type"),
             "transmission coefficient must be positive (gamma_min > 0 required)");

  // [scenario].forward needs the geometry.
  {
    const std::string fallback =
        cfg.method == Method::music ? "born"
                                    : (is_concentric && cfg.gamma.is_constant() ? "series" : "bie");
    const auto fwd = rd.text("scenario", "forward", fallback);
    const int line = rd.line_of("scenario", "forward");
    if (*fwd == "series") cfg.forward = ForwardPath::series;
    else if (*fwd == "bie") cfg.forward = ForwardPath::bie;
    else if (*fwd == "born") cfg.forward = ForwardPath::born;
    else if (*fwd == "asymptotic") cfg.forward = ForwardPath::asymptotic;
    else rd.error(line, "forward must be series, bie, born or asymptotic");
    if (cfg.forward == ForwardPath::series && !(is_concentric && cfg.gamma.is_constant()))
      rd.error(line, "series forward path needs a concentric disc with constant gamma");
    if ((cfg.forward == ForwardPath::born || cfg.forward == ForwardPath::asymptotic) && !is_discs)
      rd.error(line, "born/asymptotic forward paths need small_discs geometry");
  }

  // [discretization]
  cfg.boundary_nodes = static_cast<int>(rd.integer("discretization", "boundary_nodes", BoundaryGrid::kDefaultNodes));
  cfg.inclusion_nodes = static_cast<int>(rd.integer(
      "discretization", "inclusion_nodes", is_discs ? bie::kDefaultDiscNodes : bie::kDefaultCurveNodes));
  cfg.basis_order = static_cast<int>(rd.integer("discretization", "basis_order", cfg.method == Method::music ? 20 : 30));
  cfg.series_truncation = static_cast<int>(rd.integer("discretization", "series_truncation", 10));
  if (cfg.boundary_nodes < 4)
    rd.error(rd.line_of("discretization", "boundary_nodes"), "boundary_nodes must be at least 4");
  if (cfg.inclusion_nodes < 4 || cfg.inclusion_nodes % 2)
    rd.error(rd.line_of("discretization", "inclusion_nodes"), "inclusion_nodes must be even and >= 4");
  if (cfg.basis_order < 0)
    rd.error(rd.line_of("discretization", "basis_order"), "basis_order must be nonnegative");
  if (cfg.series_truncation < 0)
    rd.error(rd.line_of("discretization", "series_truncation"), "series_truncation must be nonnegative");
  if (cfg.method == Method::music && !(static_cast<size_t>(cfg.basis_order) + 1 > components))
    rd.error(rd.line_of("discretization", "basis_order"),
             "music needs more basis functions than inclusion components (N+1 > J), got N+1 = " +
                 std::to_string(cfg.basis_order + 1) + ", J = " + std::to_string(components));
  if (cfg.method == Method::fm && cfg.forward != ForwardPath::series &&
      2 * cfg.basis_order + 1 > cfg.boundary_nodes)
    rd.error(rd.line_of("discretization", "basis_order"),
             "fm needs 2N+1 <= boundary_nodes to form the nodal operator");

  // [noise]
  cfg.delta = rd.number("noise", "delta", 0.0);
  cfg.seed = static_cast<std::uint64_t>(rd.integer("noise", "seed", 1));
  if (!(cfg.delta >= 0.0)) rd.error(rd.line_of("noise", "delta"), "noise delta must be >= 0");

  // [music]
  cfg.rank_threshold = rd.number("music", "rank_threshold", music::kDefaultRankThreshold);
  if (!(cfg.rank_threshold > 0.0 && cfg.rank_threshold < 1.0))
    rd.error(rd.line_of("music", "rank_threshold"), "rank_threshold must lie in (0, 1)");
  if (const auto peaks = rd.text("music", "peaks", std::string("auto")); *peaks != "auto") {
    try {
      const int p = std::stoi(*peaks);
      if (p <= 0) throw std::invalid_argument("nonpositive");
      cfg.expected_peaks = p;
    } catch (const std::exception&) {
      rd.error(rd.line_of("music", "peaks"), "peaks must be 'auto' or a positive integer");
    }
  }

  // [fm]
  {
    const double alpha_default =
        cfg.forward == ForwardPath::series ? fm::kAlphaCircular : fm::kAlphaGeneral;
    const auto name = rd.text("fm", "filter", std::string("tikhonov"));
    const double alpha = rd.number("fm", "alpha", alpha_default);
    const auto beta = rd.optional_number("fm", "beta");
    if (*name == "tikhonov") cfg.filter = fm::Tikhonov{alpha};
    else if (*name == "landweber") cfg.filter = fm::Landweber{alpha, beta};
    else if (*name == "cutoff") cfg.filter = fm::SpectralCutoff{alpha};
    else rd.error(rd.line_of("fm", "filter"), "filter must be tikhonov, landweber or cutoff");
    try {
      fm::validate(cfg.filter);
    } catch (const DomainError& e) {
      rd.error(rd.line_of("fm", "alpha"), e.what());
    }
    cfg.level = rd.number("fm", "level", 0.1);
    if (!(cfg.level > 0.0 && cfg.level < 1.0))
      rd.error(rd.line_of("fm", "level"), "level must lie in (0, 1)");
  }

  // [sampling]
  cfg.x_min = rd.number("sampling", "x_min", -1.0);
  cfg.x_max = rd.number("sampling", "x_max", 1.0);
  cfg.y_min = rd.number("sampling", "y_min", -1.0);
  cfg.y_max = rd.number("sampling", "y_max", 1.0);
  cfg.step = rd.number("sampling", "step", SamplingGrid::kDefaultStep);
  try {
    (void)cfg.sampling_grid();
  } catch (const DomainError& e) {
    rd.error(rd.line_of("sampling", "step"), e.what());
  }

  // [output]
  if (const auto hm = rd.text("output", "heatmap", std::string("true")); *hm == "true" || *hm == "false")
    cfg.heatmap = *hm == "true";
  else
    rd.error(rd.line_of("output", "heatmap"), "heatmap must be true or false");

  // [scaling], [convergence]
  cfg.scaling_epsilons = rd.list("scaling", "epsilons", ',', cfg.scaling_epsilons);
  for (double e : cfg.scaling_epsilons)
    if (!(e > 0.0)) rd.error(rd.line_of("scaling", "epsilons"), "epsilons must be positive");
  cfg.convergence_n_min = static_cast<int>(rd.integer("convergence", "n_min", 2));
  cfg.convergence_n_max = static_cast<int>(rd.integer("convergence", "n_max", 8));
  cfg.convergence_n_ref = static_cast<int>(rd.integer("convergence", "n_ref", 40));
  if (!(0 <= cfg.convergence_n_min && cfg.convergence_n_min <= cfg.convergence_n_max &&
        cfg.convergence_n_max < cfg.convergence_n_ref))
    rd.error(rd.line_of("convergence", "n_ref"), "convergence needs 0 <= n_min <= n_max < n_ref");

  rd.check_unknown();
  std::stable_sort(diags.begin(), diags.end(),
                   [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
  if (diags.empty()) result.config = std::move(cfg);
  return result;
}

LoadResult load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    LoadResult r;
    r.diagnostics.push_back({path.string(), 0, "cannot open config file"});
    return r;
  }
  return parse_config(in, path.string());
}

// --- pipelines -------------------------------------------------------------------

CurrentGapMatrix forward_data(const ScenarioConfig& cfg, Exec exec) {
  const BoundaryGrid grid = cfg.boundary_grid();
  const FourierBasisSet basis = cfg.basis();
  switch (cfg.forward) {
    case ForwardPath::series: {
      const auto& disc = std::get<ConcentricDisc>(cfg.geometry);
      auto a = series::assemble_series_operator(
          grid, series::SeriesCoefficients(disc.radius, *cfg.gamma.constant_value(),
                                           cfg.series_truncation));
      return cfg.method == Method::music ? to_basis(a, basis) : a;
    }
    case ForwardPath::bie: {
      auto d = bie::assemble_bie(cfg.geometry, cfg.gamma, basis, grid, cfg.inclusion_nodes, exec);
      return cfg.method == Method::music ? d : to_nodal(d);
    }
    case ForwardPath::born: {
      auto d = bie::assemble_born(std::get<SmallDiscs>(cfg.geometry), cfg.gamma, basis, grid,
                                  cfg.inclusion_nodes, exec);
      return cfg.method == Method::music ? d : to_nodal(d);
    }
    case ForwardPath::asymptotic: {
      auto d = bie::assemble_asymptotic(std::get<SmallDiscs>(cfg.geometry), cfg.gamma, basis,
                                        grid, cfg.inclusion_nodes);
      return cfg.method == Method::music ? d : to_nodal(d);
    }
  }
  throw DomainError("unknown forward path");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

music::ResponseMatrix noisy_response(const ScenarioConfig& cfg, const CurrentGapMatrix& data) {
  CurrentGapMatrix noisy = data;
  noisy.values = fm::hadamard_noise(data.values, cfg.delta, cfg.seed);
  auto f = music::assemble_F(noisy);
  music::set_rank(f, cfg.rank_threshold);
  return f;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg, Exec exec) {
  RunReport rep;
  rep.scenario = cfg.name;
  rep.method = cfg.method;
  rep.config = cfg.echo;

  auto t0 = Clock::now();
  const CurrentGapMatrix data = forward_data(cfg, exec);
  rep.timings.push_back({"forward", seconds_since(t0)});

  const SamplingGrid grid = cfg.sampling_grid();
  if (cfg.method == Method::music) {
    t0 = Clock::now();
    auto f = noisy_response(cfg, data);
    rep.spectrum = f.svd.singular_values;
    rep.rank = f.rank;
    if (f.rank >= f.size())
      throw SolverError("MUSIC noise subspace is empty: detected rank equals N+1", 0.0);
    auto field = music::W_music(f, grid, exec);
    rep.peaks = extract_peaks(field, cfg.expected_peaks);
    rep.timings.push_back({"inversion", seconds_since(t0)});
    rep.field_metadata = field.metadata;
    return {std::move(rep), std::move(field)};
  }

  t0 = Clock::now();
  const auto sys = fm::apply_noise(data.values, cfg.delta, cfg.seed);
  rep.spectrum = sys.svd.singular_values;
  auto field = fm::W_field(sys, cfg.filter, grid, data.grid, exec);
  rep.contour = level_set(field, cfg.level);
  rep.contour_stats = contour_stats(rep.contour);
  rep.timings.push_back({"inversion", seconds_since(t0)});
  rep.field_metadata = field.metadata;
  return {std::move(rep), std::move(field)};
}

Eigen::VectorXd spectrum(const ScenarioConfig& cfg) {
  const auto data = forward_data(cfg);
  if (cfg.method == Method::music) return noisy_response(cfg, data).svd.singular_values;
  return fm::apply_noise(data.values, cfg.delta, cfg.seed).svd.singular_values;
}

}  // namespace reit::cli
