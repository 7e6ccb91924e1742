#include "robineit/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

namespace {

using namespace reit;
using namespace reit::cli;

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::optional<ScenarioConfig> load(const Options& opt) {
  if (opt.config.empty()) {
    std::cerr << "error: --config PATH is required\n";
    return std::nullopt;
  }
  auto result = load_config(opt.config);
  for (const auto& d : result.diagnostics) std::cerr << d.str() << '\n';
  if (!result.ok()) return std::nullopt;
  auto cfg = std::move(*result.config);
  if (opt.seed) {
    cfg.seed = *opt.seed;
    for (auto& e : cfg.echo)
      if (e.key == "noise.seed") e = {e.key, std::to_string(*opt.seed), "command line"};
  }
  return cfg;
}

void write_text(const Options& opt, const std::string& name, const std::string& contents) {
  std::filesystem::create_directories(opt.out);
  write_atomic(std::filesystem::path(opt.out) / name, contents);
  if (!opt.quiet) std::cout << contents;
}

int cmd_run(const Options& opt) {
  auto cfg = load(opt);
  if (!cfg) return kExitConfig;
  const auto result = run_scenario(*cfg);
  const auto files = write_run(result, *cfg, opt.out);
  if (!opt.quiet) {
    const auto& r = result.report;
    std::cout << cfg->name << " (" << to_string(cfg->method) << ", " << to_string(cfg->forward)
              << ")\n";
    if (cfg->method == Method::music) {
      std::cout << "rank " << r.rank << ", " << r.peaks.size() << " peak(s)\n";
      for (const auto& p : r.peaks)
        std::cout << "  peak (" << p.location.x << ", " << p.location.y << ")  W = " << p.value << '\n';
    } else {
      std::cout << "level set: " << r.contour.size() << " segments, mean radius "
                << r.contour_stats.mean_radius << ", radial std " << r.contour_stats.radial_std
                << '\n';
    }
    for (const auto& t : r.timings) std::cout << "  " << t.stage << ": " << t.seconds << " s\n";
    for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
  }
  return 0;
}

int cmd_validate(const Options& opt) {
  auto cfg = load(opt);
  if (!cfg) return kExitConfig;
  if (!opt.quiet) std::cout << opt.config << ": ok\n";
  return 0;
}

int cmd_spectrum(const Options& opt) {
  auto cfg = load(opt);
  if (!cfg) return kExitConfig;
  write_text(opt, "spectrum.csv", spectrum_csv(spectrum(*cfg)));
  return 0;
}

int cmd_scaling(const Options& opt) {
  auto cfg = load(opt);
  if (!cfg) return kExitConfig;
  const auto* discs = std::get_if<SmallDiscs>(&cfg->geometry);
  if (!discs) {
    std::cerr << opt.config << ": scaling needs small_discs geometry\n";
    return kExitConfig;
  }
  const auto rows = bie::asymptotic_scaling_report(*discs, cfg->gamma, cfg->scaling_epsilons,
                                                   cfg->basis_order, cfg->boundary_grid(),
                                                   cfg->inclusion_nodes);
  std::string s = "epsilon,full_minus_born,born,full_minus_asymptotic\n";
  for (const auto& r : rows)
    s += num(r.epsilon) + ',' + num(r.full_minus_born) + ',' + num(r.born) + ',' +
         num(r.full_minus_asymptotic) + '\n';
  if (rows.size() >= 2) {
    const auto sl = bie::fit_scaling_slopes(rows);
    s += "# slope born=" + num(sl.born) + " full_minus_born=" + num(sl.full_minus_born) +
         " full_minus_asymptotic=" + num(sl.full_minus_asymptotic) + '\n';
  }
  write_text(opt, "scaling.csv", s);
  return 0;
}

int cmd_convergence(const Options& opt) {
  auto cfg = load(opt);
  if (!cfg) return kExitConfig;
  const auto* disc = std::get_if<ConcentricDisc>(&cfg->geometry);
  if (!disc || !cfg->gamma.is_constant()) {
    std::cerr << opt.config << ": convergence needs a concentric disc with constant gamma\n";
    return kExitConfig;
  }
  const auto rows = series::truncation_error_report(disc->radius, *cfg->gamma.constant_value(),
                                                    cfg->convergence_n_min,
                                                    cfg->convergence_n_max,
                                                    cfg->convergence_n_ref);
  std::string s = "N,error,bound\n";
  for (const auto& r : rows) s += std::to_string(r.n) + ',' + num(r.error) + ',' + num(r.bound) + '\n';
  write_text(opt, "convergence.csv", s);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robin-transmission EIT: forward simulation, MUSIC and factorization imaging"};
  app.require_subcommand(1);
  Options opt;
  std::uint64_t seed = 0;
  app.add_option("--config", opt.config, "scenario file")->check(CLI::ExistingFile);
  app.add_option("--out", opt.out, "output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "noise seed (overrides the config)");
  app.add_flag("--quiet", opt.quiet, "suppress console output");

  int (*handler)(const Options&) = nullptr;
  auto sub = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    app.add_subcommand(name, help)->fallthrough()->callback([&handler, fn] { handler = fn; });
  };
  sub("run", "run the scenario and write field, spectrum, metadata and heatmap", cmd_run);
  sub("validate", "check the scenario without running solvers", cmd_validate);
  sub("spectrum", "write the singular values of the inverted matrix", cmd_spectrum);
  sub("scaling", "small-inclusion asymptotic scaling report", cmd_scaling);
  sub("convergence", "series truncation error report", cmd_convergence);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (*seed_opt) opt.seed = seed;

  try {
    return handler(opt);
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\nconditioning: rcond = " << e.rcond() << '\n';
    return kExitSolver;
  } catch (const DomainError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
}
