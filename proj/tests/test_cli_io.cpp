#include "thinfilm/cli_io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace thinfilm;

namespace {

const char *minimal = R"(model = droplet-small-slip
[params]
b = 0.02
lambda1 = 0.1
lambda2 = 0.1
[grid]
n = 41
)";

std::string error_of(const std::string &text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError &e) {
    return e.what();
  }
  return "";
}

std::filesystem::path scratch_dir(const std::string &name) {
  const auto dir = std::filesystem::temp_directory_path() / ("thinfilm_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

} // namespace

TEST_CASE("minimal config takes documented defaults") {
  const RunConfig c = parse_config(minimal);
  CHECK(c.model == ModelKind::DropletSmallSlip);
  CHECK(c.n == 41);
  CHECK(c.params.b == 0.02);
  CHECK(c.params.g == doctest::Approx(1.0));
  CHECK(c.params.beta == 1.0);
  CHECK(c.params.q == 0.5);
  CHECK(c.solver.dt == 1e-4);
  CHECK(c.solver.t_end == 1.0);
  CHECK(c.solver.newton_tol == 1e-10);
  CHECK(c.solver.newton_max_iter == 30);
  CHECK(c.solver.theta == 1.0);
  CHECK(c.initial.kind == InitialCondition::Kind::Parabola);
  CHECK(c.output.stride == 1);
  CHECK(!c.physical);

  const RunConfig w = parse_config("model = wedge\n[params]\nlambda1 = 1\nlambda2 = 1\n");
  CHECK(w.wedge.n == 201);
  CHECK(w.wedge.dt == 1e-3);
  CHECK(w.wedge.t_end == 0.5);
  CHECK(w.wedge.k1 == 0.1);
  CHECK(w.initial.kind == InitialCondition::Kind::Flat);
}

TEST_CASE("model names") {
  for (ModelKind m : {ModelKind::DropletSmallSlip, ModelKind::DropletLargeSlip, ModelKind::Wedge,
                      ModelKind::WedgeClassical})
    CHECK(parse_model(to_string(m)) == m);
  CHECK(variant_of(ModelKind::DropletLargeSlip) == ModelVariant::LargeSlip);
  CHECK(is_droplet(ModelKind::DropletSmallSlip));
  CHECK(!is_droplet(ModelKind::WedgeClassical));
  CHECK_THROWS_AS((void)parse_model("droplet"), ConfigError);
}

TEST_CASE("config errors name the offending input") {
  CHECK(error_of(std::string(minimal) + "n = 51\n").find("'n'") != std::string::npos);
  const std::string unknown = error_of(std::string(minimal) + "[solver]\nstep = 1\n");
  CHECK(unknown.find("step") != std::string::npos);
  CHECK(unknown.find("solver") != std::string::npos);
  CHECK(error_of(std::string(minimal) + "[nowhere]\n").find("nowhere") != std::string::npos);
  CHECK(error_of("[params]\nb = 0.02\n").find("model") != std::string::npos);
  const std::string syntax = error_of("model = wedge\n[params]\nthis line has no equals sign\n");
  CHECK(syntax.find("line 3") != std::string::npos);
  CHECK(error_of(std::string(minimal) + "[solver]\ndt = fast\n").find("dt") != std::string::npos);
  CHECK(!error_of(std::string(minimal) + "[solver]\ndt = -1\n").empty());
  CHECK(!error_of(std::string(minimal) + "[physical]\nmu = 1\n").empty());
  CHECK(!error_of(std::string(minimal) + "[wedge]\nk1 = 0.2\n").empty());
  CHECK(!error_of(std::string(minimal) + "[initial]\ntype = flat\n").empty());
  CHECK(!error_of("model = droplet-small-slip\n[params]\nlambda1 = 0.1\ng = 2\n").empty());
}

TEST_CASE("physical block is nondimensionalized") {
  const std::string text = R"(model = droplet-small-slip
[physical]
mu = 1e-3
rhoL = 1000
sigma1e = 0.072
sigma2e = 0.04
sigma3e = -0.03
gamma1 = 2e4
gamma2 = 3e4
tau1 = 1e-9
tau2 = 2e-9
rhos1e = 4e-7
rhos2e = 6e-7
alpha1 = 0.5
beta1 = 2
alpha2 = 0.3
beta2 = 1.5
m = 1.2
sigma3bar = 0.4
L = 1e-3
H = 1e-4
)";
  const RunConfig c = parse_config(text);
  REQUIRE(c.physical);
  const DimensionlessParams ref = nondimensionalize(*c.physical);
  CHECK(c.params.eps == ref.eps);
  CHECK(c.params.beta == ref.beta);
  CHECK(c.params.lambda1 == ref.lambda1);
  CHECK(c.params.lambda2 == ref.lambda2);
  CHECK(c.params.d1 == ref.d1);
  CHECK(c.params.d2 == ref.d2);
  CHECK(c.params.b == ref.b);
  CHECK(c.params.c1 == ref.c1);
  CHECK(c.params.c2 == ref.c2);
  CHECK(c.params.b1 == ref.b1);
  CHECK(c.params.g == ref.g);
  CHECK(c.params.q == ref.q);
  CHECK(c.params.b == doctest::Approx(0.03 / 0.072 * 0.4).epsilon(1e-14));
}

TEST_CASE("params section round trip") {
  const RunConfig c = parse_config(minimal);
  const RunConfig back = parse_config("model = droplet-small-slip\n" + params_section(c.params));
  CHECK(back.params.b == c.params.b);
  CHECK(back.params.lambda1 == c.params.lambda1);
  CHECK(back.params.g == c.params.g);
  CHECK(back.params.c1 == c.params.c1);
  CHECK(params_table(c.params).find("c1") != std::string::npos);
}

TEST_CASE("record CSV") {
  RunRecord empty;
  empty.columns = {"t", "lambda1"};
  CHECK(record_csv(empty) == "t,lambda1\n");

  RunRecord r = empty;
  r.rows.push_back({0.1, -1.0 / 3.0});
  const std::string csv = record_csv(r);
  std::istringstream in(csv);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  const auto comma = line.find(',');
  CHECK(std::stod(line.substr(0, comma)) == 0.1);
  CHECK(std::stod(line.substr(comma + 1)) == -1.0 / 3.0);
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("snapshot round trip is lossless") {
  FilmState s = parabola_state(21, 0.5, 1.3, 0.2);
  for (std::size_t j = 0; j < 21; ++j) {
    s.zeta1[j] = std::sin(0.7 * j) / 3.0;
    s.zeta2[j] = std::cos(0.3 * j) / 7.0;
  }
  s.t = 0.123456789;
  const FilmState b = parse_snapshot(snapshot_text(s));
  CHECK(b.h == s.h);
  CHECK(b.zeta1 == s.zeta1);
  CHECK(b.zeta2 == s.zeta2);
  CHECK(b.lambda1 == s.lambda1);
  CHECK(b.lambda2 == s.lambda2);
  CHECK(b.t == s.t);

  const auto dir = scratch_dir("snapshot");
  emit_snapshot(s, dir / "s.txt");
  const FilmState c = read_snapshot(dir / "s.txt");
  CHECK(c.h == s.h);
  std::filesystem::remove_all(dir);

  std::string missing;
  try {
    (void)read_snapshot(dir / "absent.txt");
  } catch (const std::exception &e) {
    missing = e.what();
  }
  CHECK(missing.find("absent.txt") != std::string::npos);
  CHECK_THROWS((void)parse_snapshot("# t = 0\n# n = 3\n0 0 0 0\n"));
}

TEST_CASE("initial state from a snapshot file") {
  const auto dir = scratch_dir("initial");
  RunConfig c = parse_config(minimal);
  DropletSolver solver(41, c.params, ModelVariant::SmallSlip, c.solver);
  FilmState s = parabola_state(41, 0.4, 0.9);
  emit_snapshot(s, dir / "start.txt");
  c.initial.kind = InitialCondition::Kind::File;
  c.initial.path = (dir / "start.txt").string();
  const FilmState loaded = initial_droplet_state(c, solver);
  CHECK(loaded.h == s.h);
  // densities are recomputed from the profile
  CHECK(max_abs(loaded.zeta1) > 0.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("identical runs give byte-identical output") {
  const RunConfig c = parse_config(std::string(minimal) + "[solver]\ndt = 1e-3\nt_end = 0.02\n");
  auto once = [&] {
    DropletSolver solver(c.n, c.params, variant_of(c.model), c.solver);
    const RunResult r = solver.run(initial_droplet_state(c, solver));
    return record_csv(r.record) + snapshot_text(r.final_state);
  };
  CHECK(once() == once());
}
