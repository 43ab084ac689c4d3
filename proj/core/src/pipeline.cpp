#include "seisflow/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "seisflow/errors.hpp"
#include "seisflow/f32r.hpp"
#include "seisflow/rng.hpp"

namespace seisflow {

namespace {

std::string model_dir_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "model_%04zu", index);
  return buf;
}

std::string shot_file_name(std::size_t shot) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "shot_%03zu.f32r", shot);
  return buf;
}

struct ModelOutcome {
  std::vector<ManifestEntry> entries;
  std::optional<std::string> failure;
  std::uint64_t seed = 0;
};

ModelOutcome produce_model(const PipelineConfig& cfg, std::size_t index) {
  ModelOutcome out;
  out.seed = derive_seed(cfg.master_seed, index);
  try {
    const ModelProducts products = simulate_model(cfg, index);
    const std::string dir = model_dir_name(index);
    std::filesystem::create_directories(cfg.output_dir / dir);

    const auto emit = [&](const std::string& kind, const std::string& name, const Raster& raster) {
      const auto bytes = encode_f32r(raster);
      const std::string rel = dir + "/" + name;
      write_file(cfg.output_dir / rel, bytes);
      out.entries.push_back({index, kind, rel, out.seed, fnv1a64(bytes)});
    };
    emit("velocity", "velocity.f32r", to_raster(products.model));
    for (std::size_t s = 0; s < products.gathers.size(); ++s) {
      emit("gather", shot_file_name(s), to_raster(products.gathers[s], shot_acquisition(cfg, s).source.x));
    }
    emit("rtm", "rtm.f32r", to_raster(products.image));
  } catch (const std::exception& e) {
    out.entries.clear();
    out.failure = e.what();
    std::error_code ignored;
    std::filesystem::remove_all(cfg.output_dir / model_dir_name(index), ignored);
  }
  return out;
}

}  // namespace

ModelProducts simulate_model(const PipelineConfig& cfg, std::size_t index) {
  ModelProducts p;
  p.seed = derive_seed(cfg.master_seed, index);
  p.model = generate_model(cfg.grid, cfg.layers, cfg.salt, p.seed);

  SimulationOptions sim;
  sim.spatial_order = cfg.spatial_order;
  const MigrationModel mig = smooth_model(p.model, cfg.smooth_radius);
  RtmOptions rtm_opts{cfg.spatial_order, cfg.save_stride};

  std::vector<RtmImage> partials;
  for (std::size_t s = 0; s < cfg.shots_per_model; ++s) {
    const Acquisition acq = shot_acquisition(cfg, s);
    p.gathers.push_back(forward_model(p.model, acq, cfg.source, cfg.sponge, false, sim).gather);
    const ShotGather& recorded = p.gathers.back();
    if (cfg.remove_direct) {
      const ShotGather residual =
          remove_direct_arrival(recorded, mig, acq, cfg.source, cfg.sponge, cfg.spatial_order);
      partials.push_back(rtm_shot(mig, residual, acq, cfg.source, cfg.sponge, rtm_opts));
    } else {
      partials.push_back(rtm_shot(mig, recorded, acq, cfg.source, cfg.sponge, rtm_opts));
    }
  }
  // Sequential stacking in shot order keeps the sum byte-deterministic.
  p.image = stack_images(partials);
  if (cfg.laplacian) p.image = laplacian_filter(p.image);
  if (cfg.surface_mute) p.image = surface_mute(p.image, std::max(cfg.source_z, cfg.receiver_z));
  return p;
}

DatasetResult run_dataset(const PipelineConfig& cfg, std::size_t jobs) {
  cfg.validate();
  std::filesystem::create_directories(cfg.output_dir);

  std::vector<ModelOutcome> outcomes(cfg.n_models);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t m = next++; m < cfg.n_models; m = next++) outcomes[m] = produce_model(cfg, m);
  };
  const std::size_t n_workers = std::clamp<std::size_t>(jobs, 1, cfg.n_models);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  DatasetResult result;
  for (std::size_t m = 0; m < outcomes.size(); ++m) {
    auto& o = outcomes[m];
    if (o.failure) {
      result.failures.emplace_back(m, *o.failure);
      result.entries.push_back({m, "error", "", o.seed, 0});
      continue;
    }
    for (auto& e : o.entries) result.entries.push_back(std::move(e));
  }
  const std::string csv = manifest_csv(result);
  write_file(cfg.output_dir / "manifest.csv",
             std::span(reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()));
  return result;
}

std::string manifest_csv(const DatasetResult& result) {
  std::ostringstream os;
  os << "model,kind,path,seed,fnv1a64\n";
  for (const auto& e : result.entries) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(e.checksum));
    os << e.model << ',' << e.kind << ',' << e.path << ',' << e.seed << ',' << (e.kind == "error" ? "" : hex)
       << '\n';
  }
  return os.str();
}

}  // namespace seisflow
