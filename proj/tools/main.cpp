#include "thinfilm/cli_io.hpp"
#include "thinfilm/fields.hpp"
#include "thinfilm/verification.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

using namespace thinfilm;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kSolver = 2;
constexpr int kCheck = 3;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  std::string snapshot;
  std::vector<std::string> probes;
  std::string grid = "21,11";
};

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Context {
  Options opt;
  std::ostream &log() const {
    static std::ostream null(nullptr);
    return opt.quiet ? null : std::cerr;
  }
};

RunConfig require_config(const Context &ctx, const char *command) {
  if (ctx.opt.config.empty()) throw UsageError(std::string(command) + ": --config PATH is required");
  RunConfig cfg = load_config(ctx.opt.config);
  if (cfg.physical) ctx.log() << "nondimensionalized groups:\n" << params_table(cfg.params);
  return cfg;
}

std::filesystem::path out_dir(const Context &ctx, const RunConfig &cfg) {
  return ctx.opt.out.empty() ? std::filesystem::path(cfg.output.directory) : std::filesystem::path(ctx.opt.out);
}

std::string snapshot_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%03zu.txt", k);
  return buf;
}

void write_profile_csv(const std::vector<FilmState> &states, const std::filesystem::path &path) {
  std::ostringstream os;
  os << "t,x,h\n";
  for (const auto &s : states) {
    const auto x = map_to_physical(ReferenceGrid(s.size()), s.map());
    for (std::size_t j = 0; j < s.size(); ++j)
      os << format_number(s.t) << ',' << format_number(x[j]) << ',' << format_number(s.h[j]) << '\n';
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << os.str();
}

int cmd_run(const Context &ctx) {
  const RunConfig cfg = require_config(ctx, "run");
  const auto dir = out_dir(ctx, cfg);
  if (is_droplet(cfg.model)) {
    DropletSolver solver(cfg.n, cfg.params, variant_of(cfg.model), cfg.solver);
    const FilmState init = initial_droplet_state(cfg, solver);
    const RunResult r = solver.run(init, cfg.output.snapshot_times);
    emit_record(r.record, dir / "record.csv");
    for (std::size_t k = 0; k < r.snapshots.size(); ++k) emit_snapshot(r.snapshots[k], dir / snapshot_name(k));
    emit_snapshot(r.final_state, dir / "final.txt");
    if (cfg.output.profile_csv) {
      std::vector<FilmState> states{init};
      states.insert(states.end(), r.snapshots.begin(), r.snapshots.end());
      states.push_back(r.final_state);
      write_profile_csv(states, dir / "profile.csv");
    }
    ctx.log() << to_string(cfg.model) << ": t=" << r.final_state.t << " lambda=[" << r.final_state.lambda1 << ", "
              << r.final_state.lambda2 << "] samples=" << r.record.size() << " -> " << dir.string() << '\n';
  } else {
    const WedgeModel model = cfg.model == ModelKind::Wedge ? WedgeModel::Interface : WedgeModel::Classical;
    const WedgeRun r = run_wedge(model, cfg.wedge, cfg.params);
    emit_record(r.record, dir / "record.csv");
    std::ofstream(dir / "final.txt", std::ios::binary) << wedge_snapshot_text(r.final_state, cfg.wedge);
    ctx.log() << to_string(cfg.model) << ": t=" << r.final_state.t << " lambda=" << r.final_state.lambda
              << (r.stopped_at_min_gap ? " (stopped at minimum gap)" : "") << " -> " << dir.string() << '\n';
  }
  return kOk;
}

int cmd_params(const Context &ctx) {
  const RunConfig cfg = require_config(ctx, "params");
  std::cout << params_table(cfg.params);
  return kOk;
}

std::pair<double, double> parse_pair(const std::string &s, const char *what) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw UsageError(std::string(what) + ": expected 'a,b', got '" + s + "'");
  try {
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception &) {
    throw UsageError(std::string(what) + ": expected two numbers, got '" + s + "'");
  }
}

int cmd_fields(const Context &ctx) {
  const RunConfig cfg = require_config(ctx, "fields");
  if (cfg.model != ModelKind::DropletSmallSlip)
    throw UsageError("fields: velocity reconstruction is defined for model = droplet-small-slip");
  if (ctx.opt.snapshot.empty()) throw UsageError("fields: --snapshot PATH is required");
  const FilmState s = read_snapshot(ctx.opt.snapshot);
  std::vector<FieldSample> samples;
  if (!ctx.opt.probes.empty()) {
    const FieldReconstruction fr(s, cfg.params);
    for (const auto &p : ctx.opt.probes) {
      const auto [x, y] = parse_pair(p, "--probe");
      samples.push_back(fr.sample(x, y));
    }
  } else {
    const auto [nx, ny] = parse_pair(ctx.opt.grid, "--grid");
    if (nx < 2 || ny < 2) throw UsageError("--grid: need at least 2,2 probes");
    samples = sample_grid(s, cfg.params, static_cast<std::size_t>(nx), static_cast<std::size_t>(ny));
  }
  std::ostringstream os;
  os << "x,y,u,v,p\n";
  for (const auto &f : samples)
    os << format_number(f.x) << ',' << format_number(f.y) << ',' << format_number(f.u) << ',' << format_number(f.v)
       << ',' << format_number(f.p) << '\n';
  if (ctx.opt.out.empty()) {
    std::cout << os.str();
  } else {
    std::filesystem::create_directories(ctx.opt.out);
    std::ofstream(std::filesystem::path(ctx.opt.out) / "fields.csv", std::ios::binary) << os.str();
  }
  return kOk;
}

int cmd_mms(const Context &ctx) {
  const RunConfig cfg = require_config(ctx, "mms");
  if (!is_droplet(cfg.model)) throw UsageError("mms: needs a droplet model");
  std::vector<ManufacturedCase> cases;
  if (cfg.mms.cases.empty()) {
    cases = manufactured_catalogue(cfg.params.b);
  } else {
    for (const auto &name : cfg.mms.cases) cases.push_back(manufactured_case(name, cfg.params.b));
  }
  std::ostringstream csv;
  csv << "case,kind,step,error\n";
  bool ok = true;
  for (const auto &c : cases) {
    const ConvergenceReport r = mms_run(c, cfg.mms.n_list, cfg.mms.dt_list, cfg.params, variant_of(cfg.model));
    if (c.steady) {
      const bool pass = r.steady_error <= 1e-12;
      ok = ok && pass;
      std::printf("%-22s steady error %.3e  %s\n", c.name.c_str(), r.steady_error, pass ? "PASS" : "FAIL");
      csv << c.name << ",steady,0," << format_number(r.steady_error) << '\n';
      continue;
    }
    const bool sp = std::abs(r.spatial_order - 2.0) <= 0.2;
    const bool tm = std::abs(r.temporal_order - 1.0) <= 0.2;
    ok = ok && sp && tm;
    std::printf("%-22s spatial order %.3f %s  temporal order %.3f %s\n", c.name.c_str(), r.spatial_order,
                sp ? "PASS" : "FAIL", r.temporal_order, tm ? "PASS" : "FAIL");
    for (std::size_t i = 0; i < r.n_list.size(); ++i)
      csv << c.name << ",spatial," << r.n_list[i] << ',' << format_number(r.spatial_errors[i]) << '\n';
    for (std::size_t i = 0; i < r.dt_list.size(); ++i)
      csv << c.name << ",temporal," << format_number(r.dt_list[i]) << ',' << format_number(r.temporal_errors[i])
          << '\n';
  }
  if (!ctx.opt.out.empty()) {
    std::filesystem::create_directories(ctx.opt.out);
    std::ofstream(std::filesystem::path(ctx.opt.out) / "mms.csv", std::ios::binary) << csv.str();
  }
  return ok ? kOk : kCheck;
}

int cmd_compare(const Context &ctx) {
  const RunConfig cfg = require_config(ctx, "compare");
  if (!is_droplet(cfg.model)) throw UsageError("compare: needs a droplet model");
  DropletSolver solver(cfg.n, cfg.params, variant_of(cfg.model), cfg.solver);
  const FilmState init = initial_droplet_state(cfg, solver);
  const RunResult film = solver.run(init);
  const ClassicalResult classical = classical_reference(init, cfg.solver, cfg.params, variant_of(cfg.model));
  const double gap = film_gap(film.final_state, classical.final_state);
  const double tol = std::max(10.0 * cfg.params.lambda1, 1e-6);
  const bool pass = gap <= tol;
  std::printf("lambda1 %.6g  t %.6g  L-inf gap %.6e  tolerance %.6e  %s\n", cfg.params.lambda1,
              film.final_state.t, gap, tol, pass ? "PASS" : "FAIL");
  if (!ctx.opt.out.empty()) {
    const std::filesystem::path dir(ctx.opt.out);
    emit_record(film.record, dir / "record.csv");
    emit_record(classical.record, dir / "record_classical.csv");
    emit_snapshot(film.final_state, dir / "final.txt");
    emit_snapshot(classical.final_state, dir / "final_classical.txt");
  }
  return pass ? kOk : kCheck;
}

int cmd_wedge(const Context &ctx) {
  const RunConfig cfg = require_config(ctx, "wedge");
  if (is_droplet(cfg.model)) throw UsageError("wedge: needs model = wedge or wedge-classical");
  const WedgeRun interface = run_wedge(WedgeModel::Interface, cfg.wedge, cfg.params);
  const WedgeRun classical = run_wedge(WedgeModel::Classical, cfg.wedge, cfg.params);
  auto max_jump = [](const std::vector<double> &th) {
    double m = 0.0;
    for (std::size_t i = 1; i < th.size(); ++i) m = std::max(m, std::abs(th[i] - th[i - 1]));
    return m;
  };
  const auto th_i = interface.record.series("theta");
  const auto th_c = classical.record.series("theta");
  double off = 0.0;
  for (std::size_t i = 1; i < th_c.size(); ++i) off = std::max(off, std::abs(th_c[i] - cfg.wedge.k2));
  std::printf("interface  steps %zu  t %.6g  lambda %.6g  max step |dtheta| %.6e\n", th_i.size() - 1,
              interface.final_state.t, interface.final_state.lambda, max_jump(th_i));
  std::printf("classical  steps %zu  t %.6g  lambda %.6g  max |theta - k2| after first step %.3e\n",
              th_c.size() - 1, classical.final_state.t, classical.final_state.lambda, off);
  if (!ctx.opt.out.empty()) {
    const std::filesystem::path dir(ctx.opt.out);
    emit_record(interface.record, dir / "record_interface.csv");
    emit_record(classical.record, dir / "record_classical.csv");
  }
  return kOk;
}

int cmd_validate(const Context &ctx) {
  if (ctx.opt.config.empty()) {
    if (!ctx.opt.seed) throw UsageError("validate: give --config PATH or --seed N");
    std::mt19937_64 rng(*ctx.opt.seed);
    const PhysicalParams p = random_physical(rng);
    const DimensionlessParams dp = nondimensionalize(p);
    const double e = std::max({std::abs(dp.c1 - (1.0 - 2.0 * dp.beta * dp.d1 * dp.q)),
                               std::abs(dp.c2 - 2.0 * dp.a * (0.25 - dp.alpha2beta2)),
                               std::abs(dp.b1 - dp.a * (0.25 + dp.alpha2beta2)),
                               std::abs(dp.g - p.rhos2e * p.tau2 / (p.rhos1e * p.tau1)) / std::max(1.0, dp.g)});
    std::cout << "model = droplet-small-slip\n" << params_section(dp);
    std::printf("# coefficient identity error %.3e  %s\n", e, e <= 1e-12 ? "PASS" : "FAIL");
    return e <= 1e-12 ? kOk : kCheck;
  }
  const RunConfig cfg = require_config(ctx, "validate");
  const RegimeReport r = cfg.physical ? validate_regime(*cfg.physical, cfg.params) : validate_regime(cfg.params);
  for (const auto &w : r.warnings) std::printf("warning: %s\n", w.c_str());
  for (const auto &v : r.violations)
    std::printf("violation: %s (%.6g vs %.6g)\n", v.assumption.c_str(), v.left, v.right);
  std::printf("%s: %s\n", ctx.opt.config.c_str(), r.ok() ? "regime assumptions hold" : "regime assumptions violated");
  return r.ok() ? kOk : kCheck;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Thin-film contact-line solvers (interface-formation and classical slip models)"};
  app.footer(config_reference());
  app.require_subcommand(1);
  Context ctx;
  auto common = [&](CLI::App *sc) {
    sc->add_option("--config", ctx.opt.config, "configuration file");
    sc->add_option("--out", ctx.opt.out, "output directory");
    sc->add_option("--seed", ctx.opt.seed, "seed for randomized test configurations");
    sc->add_flag("--quiet", ctx.opt.quiet, "suppress log output");
    return sc;
  };
  auto *run = common(app.add_subcommand("run", "run the configured model and write record and snapshots"));
  auto *params = common(app.add_subcommand("params", "print the dimensionless groups"));
  auto *fields = common(app.add_subcommand("fields", "velocity and pressure probes from a snapshot"));
  fields->add_option("--snapshot", ctx.opt.snapshot, "snapshot file");
  fields->add_option("--probe", ctx.opt.probes, "probe point x,y (repeatable)");
  fields->add_option("--grid", ctx.opt.grid, "probe grid NX,NY when no probes are given");
  auto *mms = common(app.add_subcommand("mms", "manufactured-solution convergence study"));
  auto *wedge = common(app.add_subcommand("wedge", "interface and classical wedge runs with contact-angle report"));
  auto *compare = common(app.add_subcommand("compare", "droplet run against the classical slip model"));
  auto *validate = common(app.add_subcommand("validate", "regime checks, or a random parameter-map check with --seed"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (run->parsed()) return cmd_run(ctx);
    if (params->parsed()) return cmd_params(ctx);
    if (fields->parsed()) return cmd_fields(ctx);
    if (mms->parsed()) return cmd_mms(ctx);
    if (wedge->parsed()) return cmd_wedge(ctx);
    if (compare->parsed()) return cmd_compare(ctx);
    if (validate->parsed()) return cmd_validate(ctx);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParameterError &e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception &e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolver;
  }
  return kUsage;
}
