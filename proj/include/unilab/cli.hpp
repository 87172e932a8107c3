#pragma once

// Batch front end: JSON analysis configs in, deterministic JSON or CSV
// reports out.

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "unilab/dgpd.hpp"
#include "unilab/field.hpp"
#include "unilab/foliation.hpp"
#include "unilab/groupoid.hpp"
#include "unilab/measures.hpp"

namespace unilab::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitNumerical = 2;

struct Diagnostic {
  std::string path;  // JSON pointer into the config
  std::string message;
  std::optional<std::size_t> offset;  // byte offset inside an expression
};

std::string to_string(const Diagnostic& d);

struct Tolerances {
  double rank_rel_tol = 1e-8;
  double commutation_tol = kCommutationTolerance;
  double group_tol = kArrowTolerance;
};

struct SquareRef {
  PointId w, x, y, z;
};

struct CompatibilityQuery {
  PointPair pair1, pair2;
};

struct Displacement {
  Vec3 dx, dy, dz;
};

struct AnalysisConfig {
  BodyDomain domain;
  std::optional<CompositeSpec> composite;
  Tolerances tolerances;
  PointSet points;
  std::vector<std::string> tasks;

  std::optional<std::pair<VectorExpr, VectorExpr>> kernel_fields;  // foliate
  std::vector<SquareRef> squares;                                  // squares
  std::vector<PointPair> pairs;                                    // misalign
  std::vector<CompatibilityQuery> compatibility;                   // misalign
  std::vector<PointId> infinitesimal_at;                           // infinitesimal
  std::vector<Displacement> displacements;                         // infinitesimal
  bool project_skew = false;                                       // infinitesimal

  std::string source_hash;
};

struct LoadResult {
  std::optional<AnalysisConfig> config;  // empty when diagnostics is non-empty
  std::vector<Diagnostic> diagnostics;
};

LoadResult load_config(const std::filesystem::path& path);
LoadResult load_config_text(const std::string& text, const std::filesystem::path& base_dir);

/// Schema errors, expression errors with offsets, dangling point references.
std::vector<Diagnostic> validate(const std::filesystem::path& path);

/// Runs every requested task. Task failures are embedded in the report;
/// `failed` is set when any task failed.
nlohmann::json run_tasks(const AnalysisConfig& config, bool& failed);

/// Sorted keys, two-space indent, doubles as %.12e.
std::string dump_deterministic(const nlohmann::json& j);

/// Per-node rows x1,x2,x3,m,sigma_min.
std::string foliation_csv(const FoliationReport& report);

enum class Format { Json, Csv };

/// Full `run` subcommand. Messages go to `err`.
int run(const std::filesystem::path& config_path, const std::filesystem::path& out_path, Format format,
        std::ostream& err);

/// Full `validate` subcommand; prints one line per diagnostic to `out`.
int validate_command(const std::filesystem::path& config_path, std::ostream& out);

}  // namespace unilab::cli
