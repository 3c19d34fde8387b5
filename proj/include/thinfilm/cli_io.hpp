#pragma once

#include "thinfilm/droplet.hpp"
#include "thinfilm/params.hpp"
#include "thinfilm/wedge.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace thinfilm {

enum class ModelKind { DropletSmallSlip, DropletLargeSlip, Wedge, WedgeClassical };

std::string to_string(ModelKind m);
ModelKind parse_model(const std::string &s);
[[nodiscard]] inline bool is_droplet(ModelKind m) {
  return m == ModelKind::DropletSmallSlip || m == ModelKind::DropletLargeSlip;
}
ModelVariant variant_of(ModelKind m);

struct InitialCondition {
  enum class Kind { Parabola, Flat, File };
  Kind kind = Kind::Parabola;
  double amplitude = 0.5;
  double half_width = 1.0;
  double center = 0.0;
  std::string path;
};

struct OutputConfig {
  std::size_t stride = 1;
  std::string directory = ".";
  std::vector<double> snapshot_times;
  bool profile_csv = false; ///< long-format (t, x, h) file for external plotting
};

struct MmsConfig {
  std::vector<std::size_t> n_list{41, 81, 161};
  std::vector<double> dt_list{4e-4, 2e-4, 1e-4};
  std::vector<std::string> cases; ///< empty = whole catalogue
};

struct RunConfig {
  ModelKind model = ModelKind::DropletSmallSlip;
  DimensionlessParams params;
  std::optional<PhysicalParams> physical; ///< set when the groups came from a [physical] block
  std::size_t n = 101;
  bool symmetric_mode = false;
  SolverConfig solver;
  WedgeConfig wedge;
  InitialCondition initial;
  OutputConfig output;
  MmsConfig mms;
};

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

/// Line-based `key = value` text with `[section]` headers; `#` and `;` start comments.
RunConfig parse_config(const std::string &text);
RunConfig load_config(const std::filesystem::path &path);

/// Every section and key with its default value.
std::string config_reference();

/// Shortest round-trip decimal form (17 significant digits).
std::string format_number(double v);

std::string record_csv(const RunRecord &record);
void emit_record(const RunRecord &record, const std::filesystem::path &path);

/// Structured text: `# key = value` header lines, then columns x h zeta1 zeta2.
std::string snapshot_text(const FilmState &s);
FilmState parse_snapshot(const std::string &text, const std::string &origin = "<snapshot>");
void emit_snapshot(const FilmState &s, const std::filesystem::path &path);
FilmState read_snapshot(const std::filesystem::path &path);

/// Wedge profile on [lambda, x_inf] in the same layout (zeta columns included).
std::string wedge_snapshot_text(const WedgeState &s, const WedgeConfig &c);

/// Initial droplet state for a config (parabola or snapshot file), densities projected.
FilmState initial_droplet_state(const RunConfig &cfg, const DropletSolver &solver);

/// Text table of the dimensionless groups and derived coefficients.
std::string params_table(const DimensionlessParams &dp);

/// Config text for the given groups (used to echo random test configurations).
std::string params_section(const DimensionlessParams &dp);

} // namespace thinfilm
