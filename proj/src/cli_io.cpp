#include "thinfilm/cli_io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace thinfilm {

namespace pt = boost::property_tree;

std::string to_string(ModelKind m) {
  switch (m) {
  case ModelKind::DropletSmallSlip: return "droplet-small-slip";
  case ModelKind::DropletLargeSlip: return "droplet-large-slip";
  case ModelKind::Wedge: return "wedge";
  case ModelKind::WedgeClassical: return "wedge-classical";
  }
  return "?";
}

ModelKind parse_model(const std::string &s) {
  for (ModelKind m : {ModelKind::DropletSmallSlip, ModelKind::DropletLargeSlip, ModelKind::Wedge,
                      ModelKind::WedgeClassical})
    if (to_string(m) == s) return m;
  throw ConfigError("unknown model '" + s +
                    "' (expected droplet-small-slip, droplet-large-slip, wedge or wedge-classical)");
}

ModelVariant variant_of(ModelKind m) {
  return m == ModelKind::DropletLargeSlip ? ModelVariant::LargeSlip : ModelVariant::SmallSlip;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

const std::map<std::string, std::set<std::string>> &schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"", {"model"}},
      {"params", {"eps", "beta", "lambda1", "lambda2", "a", "d1", "d2", "b", "m", "q", "g"}},
      {"physical", {"mu", "rhoL", "sigma1e", "sigma2e", "sigma3e", "gamma1", "gamma2", "tau1", "tau2", "rhos1e",
                    "rhos2e", "alpha1", "beta1", "alpha2", "beta2", "m", "sigma3bar", "L", "H"}},
      {"grid", {"n", "symmetric_mode"}},
      {"solver", {"dt", "t_end", "newton_tol", "newton_max_iter", "theta", "h_min", "negative_tol", "steady_tol",
                  "record_wall_time"}},
      {"wedge", {"k1", "k2", "t0", "eta", "x_inf", "A_classical", "h_tilde_min", "n_inner"}},
      {"initial", {"type", "amplitude", "half_width", "center", "path"}},
      {"output", {"stride", "directory", "snapshot_times", "profile_csv"}},
      {"mms", {"n_list", "dt_list", "cases"}},
  };
  return s;
}

std::string where(const std::string &section, const std::string &key) {
  return section.empty() ? "key '" + key + "'" : "key '" + key + "' in section [" + section + "]";
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string &text, const std::string &what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    throw ConfigError(what + ": '" + text + "' is not a number");
  return v;
}

std::size_t to_count(const std::string &text, const std::string &what) {
  const std::string t = trim(text);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    throw ConfigError(what + ": '" + text + "' is not a non-negative integer");
  return v;
}

bool to_bool(const std::string &text, const std::string &what) {
  const std::string t = trim(text);
  if (t == "true" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "no" || t == "0") return false;
  throw ConfigError(what + ": '" + text + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Key name on a given 1-based line, for parser messages that only carry the line.
std::string key_on_line(const std::string &text, unsigned long line) {
  std::istringstream is(text);
  std::string l;
  for (unsigned long i = 0; i < line && std::getline(is, l); ++i) {
  }
  const auto eq = l.find('=');
  return trim(eq == std::string::npos ? l : l.substr(0, eq));
}

class Section {
public:
  Section(const pt::ptree *tree, std::string name) : tree_(tree), name_(std::move(name)) {}
  [[nodiscard]] bool present() const { return tree_ != nullptr; }
  [[nodiscard]] bool has(const std::string &key) const { return tree_ && tree_->find(key) != tree_->not_found(); }
  [[nodiscard]] std::string raw(const std::string &key) const { return tree_->get<std::string>(pt::path(key, '\0')); }
  void num(const std::string &key, double &out) const {
    if (has(key)) out = to_double(raw(key), where(name_, key));
  }
  void count(const std::string &key, std::size_t &out) const {
    if (has(key)) out = to_count(raw(key), where(name_, key));
  }
  void integer(const std::string &key, int &out) const {
    if (has(key)) out = static_cast<int>(to_count(raw(key), where(name_, key)));
  }
  void flag(const std::string &key, bool &out) const {
    if (has(key)) out = to_bool(raw(key), where(name_, key));
  }
  void text(const std::string &key, std::string &out) const {
    if (has(key)) out = trim(raw(key));
  }

private:
  const pt::ptree *tree_;
  std::string name_;
};

} // namespace

RunConfig parse_config(const std::string &text) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error &e) {
    std::ostringstream os;
    const std::string msg = e.message();
    os << "config line " << e.line() << ": " << msg;
    if (msg.find("duplicate key") != std::string::npos) os << " '" << key_on_line(text, e.line()) << "'";
    throw ConfigError(os.str());
  }

  // Validate the layout before reading values; the ini reader drops empty sections, so headers are scanned too.
  {
    std::istringstream is(text);
    std::string l;
    for (unsigned long line = 1; std::getline(is, l); ++line) {
      const std::string t = trim(l);
      if (t.size() < 2 || t.front() != '[' || t.back() != ']') continue;
      const std::string name = trim(t.substr(1, t.size() - 2));
      if (name.empty() || !schema().count(name))
        throw ConfigError("config line " + std::to_string(line) + ": unknown section [" + name + "]");
    }
  }
  for (const auto &[name, node] : tree) {
    if (node.empty()) {
      const bool known_section = schema().count(name) && !name.empty();
      if (!schema().at("").count(name) && !known_section) throw ConfigError("unknown top-level key '" + name + "'");
      continue;
    }
    const auto it = schema().find(name);
    if (it == schema().end() || name.empty()) throw ConfigError("unknown section [" + name + "]");
    for (const auto &kv : node)
      if (!it->second.count(kv.first)) throw ConfigError("unknown " + where(name, kv.first));
  }
  auto section = [&](const std::string &name) {
    const auto it = tree.find(name);
    return Section(it == tree.not_found() ? nullptr : &it->second, name);
  };

  RunConfig cfg;
  if (tree.find("model") == tree.not_found()) throw ConfigError("missing required key 'model'");
  cfg.model = parse_model(trim(tree.get<std::string>("model")));

  const Section params = section("params");
  const Section physical = section("physical");
  if (params.present() && physical.present())
    throw ConfigError("conflicting sections [params] and [physical]: give exactly one parameter block");
  if (!params.present() && !physical.present())
    throw ConfigError("missing parameter block: give [params] or [physical]");
  if (params.present()) {
    GroupInputs gi;
    params.num("eps", gi.eps);
    params.num("beta", gi.beta);
    params.num("lambda1", gi.lambda1);
    params.num("lambda2", gi.lambda2);
    params.num("a", gi.a);
    params.num("d1", gi.d1);
    params.num("d2", gi.d2);
    params.num("b", gi.b);
    params.num("m", gi.m);
    params.num("q", gi.q);
    params.num("g", gi.g);
    if (params.has("g") && gi.lambda1 > 0.0)
      throw ConfigError("conflicting keys in [params]: 'g' is implied by lambda2/lambda1 when lambda1 > 0");
    cfg.params = from_groups(gi);
  } else {
    PhysicalParams p;
    physical.num("mu", p.mu);
    physical.num("rhoL", p.rhoL);
    physical.num("sigma1e", p.sigma1e);
    physical.num("sigma2e", p.sigma2e);
    physical.num("sigma3e", p.sigma3e);
    physical.num("gamma1", p.gamma1);
    physical.num("gamma2", p.gamma2);
    physical.num("tau1", p.tau1);
    physical.num("tau2", p.tau2);
    physical.num("rhos1e", p.rhos1e);
    physical.num("rhos2e", p.rhos2e);
    physical.num("alpha1", p.alpha1);
    physical.num("beta1", p.beta1);
    physical.num("alpha2", p.alpha2);
    physical.num("beta2", p.beta2);
    physical.num("m", p.m);
    physical.num("sigma3bar", p.sigma3bar);
    physical.num("L", p.L);
    physical.num("H", p.H);
    cfg.params = nondimensionalize(p);
    cfg.physical = p;
  }

  const Section grid = section("grid");
  const bool droplet = is_droplet(cfg.model);
  cfg.n = droplet ? 101 : cfg.wedge.n;
  grid.count("n", cfg.n);
  grid.flag("symmetric_mode", cfg.symmetric_mode);
  if (cfg.n < 7) throw ConfigError(where("grid", "n") + ": need at least 7 nodes");

  const Section solver = section("solver");
  if (!droplet) {
    cfg.solver.dt = cfg.wedge.dt;
    cfg.solver.t_end = cfg.wedge.t_end;
  }
  solver.num("dt", cfg.solver.dt);
  solver.num("t_end", cfg.solver.t_end);
  solver.num("newton_tol", cfg.solver.newton_tol);
  solver.integer("newton_max_iter", cfg.solver.newton_max_iter);
  solver.num("theta", cfg.solver.theta);
  solver.num("h_min", cfg.solver.h_min);
  solver.num("negative_tol", cfg.solver.negative_tol);
  solver.num("steady_tol", cfg.solver.steady_tol);
  solver.flag("record_wall_time", cfg.solver.record_wall_time);
  cfg.solver.symmetric_mode = cfg.symmetric_mode;
  if (!(cfg.solver.dt > 0.0)) throw ConfigError(where("solver", "dt") + ": must be positive");
  if (!(cfg.solver.theta >= 0.5 && cfg.solver.theta <= 1.0))
    throw ConfigError(where("solver", "theta") + ": must lie in [0.5, 1]");

  const Section wedge = section("wedge");
  if (wedge.present() && droplet) throw ConfigError("section [wedge] given for droplet model '" + to_string(cfg.model) + "'");
  wedge.num("k1", cfg.wedge.k1);
  wedge.num("k2", cfg.wedge.k2);
  wedge.num("t0", cfg.wedge.t0);
  wedge.num("eta", cfg.wedge.eta);
  wedge.num("x_inf", cfg.wedge.x_inf);
  wedge.num("A_classical", cfg.wedge.A_classical);
  wedge.num("h_tilde_min", cfg.wedge.h_tilde_min);
  wedge.count("n_inner", cfg.wedge.n_inner);

  const Section initial = section("initial");
  std::string type = droplet ? "parabola" : "flat";
  initial.text("type", type);
  if (type == "parabola") {
    cfg.initial.kind = InitialCondition::Kind::Parabola;
  } else if (type == "flat") {
    cfg.initial.kind = InitialCondition::Kind::Flat;
  } else if (type == "file") {
    cfg.initial.kind = InitialCondition::Kind::File;
  } else {
    throw ConfigError(where("initial", "type") + ": '" + type + "' (expected parabola, flat or file)");
  }
  initial.num("amplitude", cfg.initial.amplitude);
  initial.num("half_width", cfg.initial.half_width);
  initial.num("center", cfg.initial.center);
  initial.text("path", cfg.initial.path);
  const bool shape_keys = initial.has("amplitude") || initial.has("half_width") || initial.has("center");
  if (cfg.initial.kind == InitialCondition::Kind::File) {
    if (cfg.initial.path.empty()) throw ConfigError("missing " + where("initial", "path") + " for type = file");
    if (shape_keys) throw ConfigError("conflicting keys in [initial]: parabola shape keys given with type = file");
  } else if (initial.has("path")) {
    throw ConfigError("conflicting keys in [initial]: 'path' given with type = " + type);
  }
  if (droplet && cfg.initial.kind == InitialCondition::Kind::Flat)
    throw ConfigError(where("initial", "type") + ": a droplet needs type = parabola or file");
  if (!droplet && cfg.initial.kind != InitialCondition::Kind::Flat)
    throw ConfigError(where("initial", "type") + ": the wedge starts from a flat film (type = flat)");

  const Section output = section("output");
  output.count("stride", cfg.output.stride);
  output.text("directory", cfg.output.directory);
  output.flag("profile_csv", cfg.output.profile_csv);
  if (output.has("snapshot_times"))
    for (const auto &item : split_list(output.raw("snapshot_times")))
      cfg.output.snapshot_times.push_back(to_double(item, where("output", "snapshot_times")));
  if (cfg.output.stride == 0) throw ConfigError(where("output", "stride") + ": must be at least 1");
  cfg.solver.record_stride = cfg.output.stride;

  const Section mms = section("mms");
  if (mms.has("n_list")) {
    cfg.mms.n_list.clear();
    for (const auto &item : split_list(mms.raw("n_list"))) cfg.mms.n_list.push_back(to_count(item, where("mms", "n_list")));
  }
  if (mms.has("dt_list")) {
    cfg.mms.dt_list.clear();
    for (const auto &item : split_list(mms.raw("dt_list"))) cfg.mms.dt_list.push_back(to_double(item, where("mms", "dt_list")));
  }
  if (mms.has("cases")) cfg.mms.cases = split_list(mms.raw("cases"));

  cfg.wedge.n = cfg.n;
  cfg.wedge.dt = cfg.solver.dt;
  cfg.wedge.t_end = cfg.solver.t_end;
  cfg.wedge.newton_tol = cfg.solver.newton_tol;
  cfg.wedge.newton_max_iter = cfg.solver.newton_max_iter;
  cfg.wedge.record_stride = cfg.output.stride;
  cfg.wedge.record_wall_time = cfg.solver.record_wall_time;
  if (!droplet) {
    try {
      validate(cfg.wedge);
    } catch (const std::invalid_argument &e) {
      throw ConfigError(std::string("[wedge]: ") + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError &e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const ParameterError &e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string config_reference() {
  const SolverConfig s;
  const WedgeConfig w;
  const InitialCondition ic;
  const OutputConfig o;
  std::ostringstream os;
  os << "Config file: `key = value` lines, `[section]` headers, `#` or `;` comments.\n"
     << "model = droplet-small-slip | droplet-large-slip | wedge | wedge-classical   (required)\n"
     << "[params]    eps beta lambda1 lambda2 a d1 d2 b m q g\n"
     << "            defaults: eps=0 beta=1 lambda1=0 lambda2=0 a=1 d1=0 d2=0 b=0 m=1 q=0.5;\n"
     << "            g = lambda2/lambda1 (set g only when lambda1 = 0)\n"
     << "[physical]  mu rhoL sigma1e sigma2e sigma3e gamma1 gamma2 tau1 tau2 rhos1e rhos2e\n"
     << "            alpha1 beta1 alpha2 beta2 m sigma3bar L H   (SI units; instead of [params])\n"
     << "[grid]      n=101 (wedge: " << w.n << ")  symmetric_mode=false\n"
     << "[solver]    dt=" << s.dt << " (wedge: " << w.dt << ")  t_end=" << s.t_end << " (wedge: " << w.t_end
     << ")  newton_tol=" << s.newton_tol << "  newton_max_iter=" << s.newton_max_iter << "\n"
     << "            theta=" << s.theta << "  h_min=" << s.h_min << "  negative_tol=" << s.negative_tol
     << "  steady_tol=" << s.steady_tol << " (0 = off)  record_wall_time=false\n"
     << "[wedge]     k1=" << w.k1 << "  k2=" << w.k2 << "  t0=" << w.t0 << "  eta=" << w.eta << "  x_inf=" << w.x_inf
     << "  A_classical=" << w.A_classical << "  h_tilde_min=" << w.h_tilde_min << "  n_inner=" << w.n_inner << "\n"
     << "[initial]   type=parabola (droplet) | file | flat (wedge)\n"
     << "            amplitude=" << ic.amplitude << "  half_width=" << ic.half_width << "  center=" << ic.center
     << "  path=<snapshot file>\n"
     << "[output]    stride=" << o.stride << "  directory=" << o.directory
     << "  snapshot_times=<comma list>  profile_csv=false\n"
     << "[mms]       n_list=41,81,161  dt_list=4e-4,2e-4,1e-4  cases=<comma list, default all>\n";
  return os.str();
}

std::string record_csv(const RunRecord &record) {
  std::ostringstream os;
  for (std::size_t i = 0; i < record.columns.size(); ++i) os << (i ? "," : "") << record.columns[i];
  os << '\n';
  for (const auto &row : record.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
  return os.str();
}

namespace {

void write_file(const std::filesystem::path &path, const std::string &content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

} // namespace

void emit_record(const RunRecord &record, const std::filesystem::path &path) { write_file(path, record_csv(record)); }

std::string snapshot_text(const FilmState &s) {
  std::ostringstream os;
  const std::size_t n = s.size();
  os << "# thinfilm droplet snapshot\n"
     << "# t = " << format_number(s.t) << '\n'
     << "# lambda1 = " << format_number(s.lambda1) << '\n'
     << "# lambda2 = " << format_number(s.lambda2) << '\n'
     << "# n = " << n << '\n'
     << "x h zeta1 zeta2\n";
  const ReferenceGrid grid(n);
  const auto x = map_to_physical(grid, s.map());
  for (std::size_t j = 0; j < n; ++j)
    os << format_number(x[j]) << ' ' << format_number(s.h[j]) << ' ' << format_number(s.zeta1[j]) << ' '
       << format_number(s.zeta2[j]) << '\n';
  return os.str();
}

FilmState parse_snapshot(const std::string &text, const std::string &origin) {
  std::istringstream is(text);
  std::string line;
  std::map<std::string, std::string> header;
  bool columns = false;
  FilmState s;
  std::size_t line_no = 0;
  auto fail = [&](const std::string &msg) {
    std::ostringstream os;
    os << origin << ":" << line_no << ": " << msg;
    throw ConfigError(os.str());
  };
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const auto eq = t.find('=');
      if (eq != std::string::npos) header[trim(t.substr(1, eq - 1))] = trim(t.substr(eq + 1));
      continue;
    }
    if (!columns) {
      if (t != "x h zeta1 zeta2") fail("expected column header 'x h zeta1 zeta2'");
      columns = true;
      continue;
    }
    std::istringstream row(t);
    std::string fx, fh, f1, f2, extra;
    if (!(row >> fx >> fh >> f1 >> f2) || (row >> extra)) fail("expected four columns");
    to_double(fx, origin + ":" + std::to_string(line_no) + " x");
    s.h.push_back(to_double(fh, origin + ":" + std::to_string(line_no) + " h"));
    s.zeta1.push_back(to_double(f1, origin + ":" + std::to_string(line_no) + " zeta1"));
    s.zeta2.push_back(to_double(f2, origin + ":" + std::to_string(line_no) + " zeta2"));
  }
  for (const char *key : {"t", "lambda1", "lambda2", "n"})
    if (!header.count(key)) throw ConfigError(origin + ": missing header key '" + key + "'");
  s.t = to_double(header["t"], origin + " header t");
  s.lambda1 = to_double(header["lambda1"], origin + " header lambda1");
  s.lambda2 = to_double(header["lambda2"], origin + " header lambda2");
  const std::size_t n = to_count(header["n"], origin + " header n");
  if (n != s.size()) {
    std::ostringstream os;
    os << origin << ": header announces n = " << n << " but " << s.size() << " rows follow";
    throw ConfigError(os.str());
  }
  return s;
}

void emit_snapshot(const FilmState &s, const std::filesystem::path &path) { write_file(path, snapshot_text(s)); }

FilmState read_snapshot(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open snapshot file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_snapshot(ss.str(), path.string());
}

std::string wedge_snapshot_text(const WedgeState &s, const WedgeConfig &c) {
  std::ostringstream os;
  const std::size_t n = s.h.size();
  const WedgePosition pos = wedge_position(s.t, c);
  os << "# thinfilm wedge snapshot\n"
     << "# t = " << format_number(s.t) << '\n'
     << "# lambda = " << format_number(s.lambda) << '\n'
     << "# h_tilde = " << format_number(pos.h_tilde) << '\n'
     << "# x_inf = " << format_number(c.x_inf) << '\n'
     << "# n = " << n << '\n'
     << "x h zeta1 zeta2\n";
  for (std::size_t j = 0; j < n; ++j) {
    const double x = s.lambda + (c.x_inf - s.lambda) * static_cast<double>(j) / static_cast<double>(n - 1);
    os << format_number(x) << ' ' << format_number(s.h[j]) << ' ' << format_number(s.zeta1[j]) << ' '
       << format_number(s.zeta2[j]) << '\n';
  }
  return os.str();
}

FilmState initial_droplet_state(const RunConfig &cfg, const DropletSolver &solver) {
  FilmState s;
  if (cfg.initial.kind == InitialCondition::Kind::File) {
    s = read_snapshot(cfg.initial.path);
    if (s.size() != cfg.n) {
      std::ostringstream os;
      os << cfg.initial.path << ": snapshot has " << s.size() << " nodes but [grid] n = " << cfg.n;
      throw ConfigError(os.str());
    }
  } else {
    s = parabola_state(cfg.n, cfg.initial.amplitude, cfg.initial.half_width, cfg.initial.center);
  }
  return solver.project(s);
}

std::string params_table(const DimensionlessParams &dp) {
  std::ostringstream os;
  auto row = [&](const char *name, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-12s %.10g\n", name, v);
    os << buf;
  };
  row("eps", dp.eps);
  row("beta", dp.beta);
  row("lambda1", dp.lambda1);
  row("lambda2", dp.lambda2);
  row("a", dp.a);
  row("d1", dp.d1);
  row("d2", dp.d2);
  row("b", dp.b);
  row("m", dp.m);
  row("g", dp.g);
  row("q", dp.q);
  row("alpha2beta2", dp.alpha2beta2);
  row("c1", dp.c1);
  row("c2", dp.c2);
  row("b1", dp.b1);
  return os.str();
}

std::string params_section(const DimensionlessParams &dp) {
  std::ostringstream os;
  os << "[params]\n"
     << "eps = " << format_number(dp.eps) << '\n'
     << "beta = " << format_number(dp.beta) << '\n'
     << "lambda1 = " << format_number(dp.lambda1) << '\n'
     << "lambda2 = " << format_number(dp.lambda2) << '\n'
     << "a = " << format_number(dp.a) << '\n'
     << "d1 = " << format_number(dp.d1) << '\n'
     << "d2 = " << format_number(dp.d2) << '\n'
     << "b = " << format_number(dp.b) << '\n'
     << "m = " << format_number(dp.m) << '\n'
     << "q = " << format_number(dp.q) << '\n';
  if (dp.lambda1 == 0.0) os << "g = " << format_number(dp.g) << '\n';
  return os.str();
}

} // namespace thinfilm
