#pragma once

#include "meshtv/imaging.hpp"
#include "meshtv/mesh.hpp"
#include "meshtv/solver_config.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace meshtv {

// --- synthetic scenes -------------------------------------------------------

enum class SyntheticPattern {
  /// Two regions (0.25 / 0.75) separated by a great circle.
  TwoPatch,
  /// Four intensities over the eight octants of a rotated frame.
  Checker,
};

struct SyntheticParams {
  int subdivisions = 3;
  SyntheticPattern pattern = SyntheticPattern::TwoPatch;
  int channels = 1;
};

struct SyntheticScene {
  TriangleMesh mesh;
  MeshImage image;
  std::string name;
};

/// Unit-sphere icosahedron refined `subdivisions` times by 1-to-4 splits.
TriangleMesh make_icosphere(int subdivisions);

SyntheticScene generate_synthetic(const SyntheticParams& params);

/// Parses "icosphere_k=K,pattern=two_patch|checker[,channels=1|3]".
SyntheticParams parse_synthetic(std::string_view text);

// --- experiment harness -----------------------------------------------------

struct ExperimentSpec {
  std::filesystem::path mesh_path;
  std::filesystem::path image_path;
  std::optional<SyntheticParams> synthetic;
  /// Empty disables writing restored images, traces and results.csv.
  std::filesystem::path output_dir;

  std::vector<double> noise_levels{0.05, 0.10, 0.20, 0.30};
  std::vector<double> p_values{0.1, 0.3, 0.5, 0.7, 0.9};
  int trials = 10;
  std::uint64_t base_seed = 0;
  SolverConfig solver;
  /// When false, wall times are reported as 0 so results.csv depends only on the inputs.
  bool record_timing = true;
  /// Receives non-fatal diagnostics such as ADMM solves that hit inner_max_iter.
  std::function<void(const std::string&)> on_warning;

  void validate() const;
};

struct ResultRow {
  std::string image_name;
  double noise_level = 0.0;
  /// "L1TV" or "LpTV_p<value>".
  std::string method;
  double psnr_db = 0.0;
  double wall_time_s = 0.0;
  int outer_iters = 0;
};

/// For each noise level and trial: corrupt the clean image with seed
/// base_seed + trial, solve L1TV, warm-start the L_pTV solver from it for
/// every p, clamp to [0,1] and score against the clean image. Rows are
/// averaged over trials, ordered by noise level then method.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

/// Header `image,noise_level,method,psnr_db,wall_time_s,outer_iters`.
std::string results_csv(const std::vector<ResultRow>& rows);

std::string format_number(double value);

}  // namespace meshtv
