#include "meshtv/experiment.hpp"

#include "meshtv/admm.hpp"
#include "meshtv/diffops.hpp"
#include "meshtv/errors.hpp"
#include "meshtv/lptv.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

namespace meshtv {
namespace {

struct Scene {
  TriangleMesh mesh;
  MeshImage image;
  std::string name;
};

Scene load_scene(const ExperimentSpec& spec) {
  if (spec.synthetic) {
    auto s = generate_synthetic(*spec.synthetic);
    return {std::move(s.mesh), std::move(s.image), std::move(s.name)};
  }
  TriangleMesh mesh = load_mesh(spec.mesh_path);
  MeshImage image = load_image(spec.image_path);
  if (image.vertex_count() != mesh.vertex_count()) {
    throw DimensionMismatch("image has " + std::to_string(image.vertex_count()) + " vertices, mesh has " +
                            std::to_string(mesh.vertex_count()));
  }
  if (!image.in_unit_range()) throw InvalidParams("clean image values must lie in [0,1]");
  return {std::move(mesh), std::move(image), spec.image_path.stem().string()};
}

std::string method_name(double p) { return "LpTV_p" + format_number(p); }

struct Accumulator {
  double psnr = 0.0;
  double time = 0.0;
  double iters = 0.0;
};

struct Timed {
  PlmResult result;
  double seconds;
};

template <class Fn>
Timed timed(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  PlmResult result = fn();
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  return {std::move(result), elapsed.count()};
}

}  // namespace

void ExperimentSpec::validate() const {
  if (!synthetic && (mesh_path.empty() || image_path.empty()))
    throw InvalidParams("either a synthetic scene or both mesh and image paths are required");
  if (noise_levels.empty()) throw InvalidParams("at least one noise level is required");
  for (double level : noise_levels)
    if (!(level >= 0.0 && level <= 1.0)) throw InvalidParams("noise levels must lie in [0,1]");
  for (double p : p_values)
    if (!(p > 0.0 && p <= 1.0)) throw InvalidParams("p values must lie in (0,1]");
  if (trials <= 0) throw InvalidParams("trials must be positive");
  SolverConfig check = solver;
  check.p = 1.0;
  check.validate();
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const Scene scene = load_scene(spec);
  const GradientOperator op(scene.mesh);
  const bool write = !spec.output_dir.empty();

  std::vector<ResultRow> rows;
  for (double level : spec.noise_levels) {
    std::vector<Accumulator> acc(1 + spec.p_values.size());
    for (int trial = 0; trial < spec.trials; ++trial) {
      const std::string where = "image=" + scene.name + " noise=" + format_number(level) +
                                " trial=" + std::to_string(trial);
      auto stage_error = [&](const std::string& stage, const std::exception& e) {
        return Error(where + " stage=" + stage + ": " + e.what());
      };
      auto record = [&](std::size_t slot, const std::string& method, const Timed& run) {
        const MeshImage restored = clamp_to_unit(run.result.u);
        acc[slot].psnr += psnr(restored, scene.image);
        acc[slot].time += spec.record_timing ? run.seconds : 0.0;
        acc[slot].iters += static_cast<double>(run.result.trace.records.size());
        if (const int failures = run.result.trace.inner_failures(); failures > 0 && spec.on_warning) {
          spec.on_warning(where + " method=" + method + ": " + std::to_string(failures) +
                          " inner solve(s) stopped at inner_max_iter");
        }
        if (write && trial == 0) {
          const auto dir = spec.output_dir / scene.name / format_number(level) / method;
          std::filesystem::create_directories(dir);
          write_image_ply(dir / "restored.ply", scene.mesh, restored);
          run.result.trace.write_csv(dir / "trace.csv");
        }
      };

      const MeshImage noisy =
          add_salt_pepper(scene.image, {level, spec.base_seed + static_cast<std::uint64_t>(trial)});

      SolverConfig l1_config = spec.solver;
      l1_config.p = 1.0;
      Timed l1{PlmResult{noisy, {}, false, 0.0}, 0.0};
      try {
        l1 = timed([&] { return plm_solve(noisy, op, l1_config, noisy); });
        record(0, "L1TV", l1);
      } catch (const std::exception& e) {
        throw stage_error("L1TV", e);
      }

      for (std::size_t k = 0; k < spec.p_values.size(); ++k) {
        SolverConfig config = spec.solver;
        config.p = spec.p_values[k];
        const std::string method = method_name(config.p);
        try {
          const auto run = timed([&] { return plm_solve(noisy, op, config, l1.result.u); });
          record(k + 1, method, run);
        } catch (const std::exception& e) {
          throw stage_error(method, e);
        }
      }
    }

    const double n = static_cast<double>(spec.trials);
    for (std::size_t slot = 0; slot < acc.size(); ++slot) {
      ResultRow row;
      row.image_name = scene.name;
      row.noise_level = level;
      row.method = slot == 0 ? "L1TV" : method_name(spec.p_values[slot - 1]);
      row.psnr_db = acc[slot].psnr / n;
      row.wall_time_s = acc[slot].time / n;
      row.outer_iters = static_cast<int>(std::lround(acc[slot].iters / n));
      rows.push_back(std::move(row));
    }
  }

  if (write) {
    std::filesystem::create_directories(spec.output_dir);
    std::ofstream out(spec.output_dir / "results.csv", std::ios::binary);
    if (!out) throw Error("cannot write results.csv in " + spec.output_dir.string());
    out << results_csv(rows);
  }
  return rows;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::string out = "image,noise_level,method,psnr_db,wall_time_s,outer_iters\n";
  char buf[128];
  for (const auto& row : rows) {
    const std::string psnr_text = std::isinf(row.psnr_db) ? "inf" : [&] {
      std::snprintf(buf, sizeof buf, "%.6f", row.psnr_db);
      return std::string(buf);
    }();
    std::snprintf(buf, sizeof buf, "%.6f", row.wall_time_s);
    out += row.image_name + "," + format_number(row.noise_level) + "," + row.method + "," + psnr_text + "," +
           buf + "," + std::to_string(row.outer_iters) + "\n";
  }
  return out;
}

}  // namespace meshtv
