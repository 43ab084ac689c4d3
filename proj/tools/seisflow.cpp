// seisflow command-line driver: every pipeline stage runs on files.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "seisflow/config.hpp"
#include "seisflow/errors.hpp"
#include "seisflow/f32r.hpp"
#include "seisflow/metrics.hpp"
#include "seisflow/nas.hpp"
#include "seisflow/pipeline.hpp"
#include "seisflow/pruner.hpp"
#include "seisflow/render.hpp"
#include "seisflow/rng.hpp"
#include "seisflow/rtm.hpp"

namespace fs = std::filesystem;
using namespace seisflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPartial = 2;

struct Common {
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::string out = ".";
  std::string config;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Seed (master seed for dataset, model seed for gen-velocity)");
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--config", c.config, "Pipeline config file (key = value)");
}

PipelineConfig load_config(const Common& c) {
  PipelineConfig cfg = c.config.empty() ? PipelineConfig{} : PipelineConfig::load(c.config);
  if (c.seed) cfg.master_seed = *c.seed;
  return cfg;
}

fs::path out_dir(const Common& c) {
  fs::path p(c.out);
  fs::create_directories(p);
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string shot_name(std::size_t shot) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "shot_%03zu.f32r", shot);
  return buf;
}

// Geometry overrides shared by forward and rtm.
struct Geometry {
  std::size_t shot = 0;
  std::vector<double> src;  // x, z
  std::vector<double> receivers;
  std::optional<double> receiver_z;
  std::optional<double> f0;
  std::optional<double> dt;
  std::optional<std::size_t> nt;
  std::optional<std::size_t> sponge_width;
};

void add_geometry(CLI::App* cmd, Geometry& g) {
  cmd->add_option("--shot", g.shot, "Shot index in the config geometry");
  cmd->add_option("--src", g.src, "Source position x,z in meters")->delimiter(',')->expected(2);
  cmd->add_option("--receivers", g.receivers, "Receiver x positions, comma separated")->delimiter(',');
  cmd->add_option("--receiver-z", g.receiver_z, "Receiver depth in meters");
  cmd->add_option("--f0", g.f0, "Ricker dominant frequency (Hz)");
  cmd->add_option("--dt", g.dt, "Time step (s)");
  cmd->add_option("--nt", g.nt, "Number of time samples");
  cmd->add_option("--sponge-width", g.sponge_width, "Absorbing band width (cells)");
}

void apply_geometry(const Geometry& g, PipelineConfig& cfg) {
  if (g.f0) cfg.source.f0 = *g.f0;
  if (g.dt) cfg.dt = *g.dt;
  if (g.nt) cfg.nt = *g.nt;
  if (g.sponge_width) cfg.sponge.width = *g.sponge_width;
  if (g.receiver_z) cfg.receiver_z = *g.receiver_z;
}

Acquisition make_acquisition(const Geometry& g, const PipelineConfig& cfg, std::size_t shot,
                             std::optional<double> source_x = std::nullopt) {
  Acquisition acq = shot_acquisition(cfg, shot);
  if (source_x) acq.source.x = *source_x;
  if (!g.src.empty()) acq.source = {g.src[0], g.src[1]};
  if (!g.receivers.empty()) acq.receiver_xs = g.receivers;
  return acq;
}

int cmd_gen_velocity(const Common& c) {
  const PipelineConfig cfg = load_config(c);
  const std::uint64_t seed = c.seed ? *c.seed : derive_seed(cfg.master_seed, 0);
  const VelocityModel m = generate_model(cfg.grid, cfg.layers, cfg.salt, seed);
  const fs::path path = out_dir(c) / "velocity.f32r";
  write_f32r(path, to_raster(m));
  std::cout << path.string() << ',' << seed << ',' << m.vp.min() << ',' << m.vp.max() << '\n';
  return kExitOk;
}

int cmd_forward(const Common& c, const Geometry& g, const std::string& model_path) {
  PipelineConfig cfg = load_config(c);
  apply_geometry(g, cfg);
  const VelocityModel m = velocity_from_raster(read_f32r(model_path));
  cfg.grid = m.grid;
  const Acquisition acq = make_acquisition(g, cfg, g.shot);
  SimulationOptions sim;
  sim.spatial_order = cfg.spatial_order;
  const ShotGather gather = forward_model(m, acq, cfg.source, cfg.sponge, false, sim).gather;
  const fs::path path = out_dir(c) / shot_name(g.shot);
  write_f32r(path, to_raster(gather, acq.source.x));
  std::cout << path.string() << ',' << gather.nt() << ',' << gather.n_receivers() << '\n';
  return kExitOk;
}

int cmd_rtm(const Common& c, const Geometry& g, const std::string& model_path,
            const std::string& gather_dir, bool partials) {
  PipelineConfig cfg = load_config(c);
  apply_geometry(g, cfg);
  const VelocityModel m = velocity_from_raster(read_f32r(model_path));
  cfg.grid = m.grid;
  const MigrationModel mig = smooth_model(m, cfg.smooth_radius);

  std::vector<fs::path> shots;
  for (const auto& e : fs::directory_iterator(gather_dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.rfind("shot_", 0) == 0 && e.path().extension() == ".f32r") {
      shots.push_back(e.path());
    }
  }
  std::sort(shots.begin(), shots.end());
  if (shots.empty()) throw ConfigError("no shot_*.f32r files in " + gather_dir);

  RtmOptions opts{cfg.spatial_order, cfg.save_stride};
  std::vector<RtmImage> images(shots.size());
  std::vector<std::string> errors(shots.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t s = next++; s < shots.size(); s = next++) {
      try {
        const Raster r = read_f32r(shots[s]);
        if (r.kind != RasterKind::gather) throw FormatError(shots[s].string() + " is not a gather raster");
        ShotGather gather{field_from_raster(r), r.meta0, {}, cfg.receiver_z};
        Acquisition acq = make_acquisition(g, cfg, s, r.meta1);
        acq.dt = r.meta0;
        acq.nt = r.rows;
        gather.receiver_xs = acq.receiver_xs;
        if (cfg.remove_direct) gather = remove_direct_arrival(gather, mig, acq, cfg.source, cfg.sponge, cfg.spatial_order);
        images[s] = rtm_shot(mig, gather, acq, cfg.source, cfg.sponge, opts);
      } catch (const std::exception& e) {
        errors[s] = e.what();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < std::min(c.jobs, shots.size()); ++w) pool.emplace_back(worker);
    worker();
  }
  for (std::size_t s = 0; s < shots.size(); ++s) {
    if (!errors[s].empty()) throw ConfigError(shots[s].filename().string() + ": " + errors[s]);
  }

  const fs::path dir = out_dir(c);
  if (partials) {
    for (std::size_t s = 0; s < shots.size(); ++s) {
      write_f32r(dir / ("partial_" + shots[s].filename().string()), to_raster(images[s]));
    }
  }
  RtmImage image = stack_images(images);
  if (cfg.laplacian) image = laplacian_filter(image);
  if (cfg.surface_mute) {
    const double src_z = g.src.empty() ? cfg.source_z : g.src[1];
    image = surface_mute(image, std::max(src_z, cfg.receiver_z));
  }
  write_f32r(dir / "rtm.f32r", to_raster(image));
  std::cout << (dir / "rtm.f32r").string() << ',' << shots.size() << '\n';
  return kExitOk;
}

int cmd_metrics(const Common& c, const std::string& a_path, const std::string& b_path, double lambda,
                const std::string& norm, const std::string& window, std::size_t window_size) {
  const Field2D a = field_from_raster(read_f32r(a_path));
  const Field2D b = field_from_raster(read_f32r(b_path));
  SsimConfig cfg;
  if (window == "uniform") cfg = SsimConfig::uniform(window_size ? window_size : 8);
  else if (window_size) cfg.window_size = window_size;
  const auto ext = FeatureExtractor::default_bank();
  const PixelNorm pn = norm == "l1" ? PixelNorm::L1 : PixelNorm::L2;

  std::ostringstream row;
  row.precision(12);
  row << a_path << ',' << b_path << ',' << ssim(a, b, cfg) << ',' << pixel_loss(a, b, PixelNorm::L1) << ','
      << pixel_loss(a, b, PixelNorm::L2) << ',' << feature_loss(a, b, ext) << ','
      << combined_loss(a, b, lambda, ext, pn) << '\n';
  const std::string header = "file_a,file_b,ssim,l1,l2,feature,combined\n";
  std::cout << row.str();
  write_text(out_dir(c) / "metrics.csv", header + row.str());
  return kExitOk;
}

int cmd_prune(const Common& c, const std::string& path, double fraction) {
  const Raster in = read_f32r(path);
  const WeightTensor w = tensor_from_raster(in);
  const WeightTensor pruned = apply_mask(w, level_prune(w, {fraction}));
  Raster out = to_raster(pruned);
  out.meta0 = in.meta0;
  out.meta1 = in.meta1;
  const fs::path dir = out_dir(c);
  write_f32r(dir / "pruned.f32r", out);
  std::ostringstream report;
  report << w.size() << ',' << fraction << ',' << sparsity_of(pruned) << '\n';
  std::cout << report.str();
  write_text(dir / "prune_report.csv", "n,target_fraction,achieved_fraction\n" + report.str());
  return kExitOk;
}

nas::AlphaMatrix read_alpha_csv(const std::string& path) {
  const auto bytes = read_file(path);
  std::istringstream in(std::string(bytes.begin(), bytes.end()));
  std::vector<double> logits;
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::size_t cols = 0;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
      if (used == 0 || used != cell.size()) throw FormatError(path + ": bad number '" + cell + "'");
      logits.push_back(v);
      ++cols;
    }
    if (cols != nas::kNumOps) {
      throw FormatError(path + ": row " + std::to_string(rows + 1) + " has " + std::to_string(cols) +
                        " columns, expected " + std::to_string(nas::kNumOps));
    }
    ++rows;
  }
  return nas::AlphaMatrix(rows, std::move(logits));
}

int cmd_nas(const Common& c, const std::string& alpha_path, std::size_t nodes, const std::string& kind,
            std::size_t depth, std::uint64_t base_channels) {
  nas::CellSpec cell;
  cell.n_nodes = nodes;
  if (kind == "encoder") cell.kind = nas::CellKind::encoder;
  else if (kind == "decoder") cell.kind = nas::CellKind::decoder;
  else throw ConfigError("unknown cell kind '" + kind + "'");
  const auto g = nas::discretize(read_alpha_csv(alpha_path), cell);

  nas::BackboneConfig bb;
  bb.depth = depth;
  bb.base_channels = base_channels;
  bb.nodes_per_cell = nodes;
  const auto count = nas::param_count(g, bb);
  const fs::path dir = out_dir(c);
  write_text(dir / "genotype.txt", nas::serialize(g));
  write_text(dir / "param_count.txt", std::to_string(count) + "\n");
  std::cout << nas::serialize(g) << "param_count " << count << '\n';
  return kExitOk;
}

int cmd_dataset(const Common& c) {
  PipelineConfig cfg = load_config(c);
  if (c.out != ".") cfg.output_dir = c.out;
  const DatasetResult res = run_dataset(cfg, c.jobs);
  for (const auto& [model, reason] : res.failures) {
    std::cerr << "model " << model << " failed: " << reason << '\n';
  }
  std::cout << (cfg.output_dir / "manifest.csv").string() << ',' << res.entries.size() << ','
            << res.failures.size() << '\n';
  return res.ok() ? kExitOk : kExitPartial;
}

int cmd_render(const Common& c, const std::string& path) {
  const Field2D f = field_from_raster(read_f32r(path));
  const fs::path target = out_dir(c) / fs::path(path).filename().replace_extension(".pgm");
  write_pgm(target, f);
  std::cout << target.string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seisflow: synthetic seismic dataset generation, imaging and model tooling"};
  app.require_subcommand(1);

  Common common;
  Geometry geom;
  std::string model_path, gather_dir, file_a, file_b, alpha_path, input;
  bool partials = false;
  double lambda = 1.0, fraction = 0.5;
  std::string norm = "l2", window = "gaussian", kind = "encoder";
  std::size_t window_size = 0, nodes = 4, depth = 4;
  std::uint64_t base_channels = 16;

  auto* gen = app.add_subcommand("gen-velocity", "Generate one layered velocity model with salt");
  add_common(gen, common);

  auto* fwd = app.add_subcommand("forward", "Model one shot gather from a velocity file");
  add_common(fwd, common);
  add_geometry(fwd, geom);
  fwd->add_option("--model", model_path, "Velocity F32R file")->required();

  auto* rtm = app.add_subcommand("rtm", "Migrate every shot in a gather directory and stack");
  add_common(rtm, common);
  add_geometry(rtm, geom);
  rtm->add_option("--model", model_path, "Velocity F32R file (smoothed with rtm.smooth_radius)")->required();
  rtm->add_option("--gathers", gather_dir, "Directory holding shot_*.f32r")->required();
  rtm->add_flag("--partials", partials, "Also write per-shot images");

  auto* met = app.add_subcommand("metrics", "Compare two F32R images");
  add_common(met, common);
  met->add_option("file_a", file_a)->required();
  met->add_option("file_b", file_b)->required();
  met->add_option("--lambda", lambda, "Feature-loss weight in the combined loss");
  met->add_option("--norm", norm, "Pixel norm of the combined loss")->check(CLI::IsMember({"l1", "l2"}));
  met->add_option("--window", window, "SSIM window")->check(CLI::IsMember({"gaussian", "uniform"}));
  met->add_option("--window-size", window_size, "SSIM window size");

  auto* prn = app.add_subcommand("prune", "Level-prune a weight tensor");
  add_common(prn, common);
  prn->add_option("weights", input, "Weight F32R file")->required();
  prn->add_option("--fraction", fraction, "Target sparsity in [0, 1]");

  auto* nasd = app.add_subcommand("nas-discretize", "Discretize an alpha matrix into a genotype");
  add_common(nasd, common);
  nasd->add_option("--alpha", alpha_path, "Alpha CSV, one edge per row, 6 columns")->required();
  nasd->add_option("--nodes", nodes, "Intermediate nodes per cell");
  nasd->add_option("--kind", kind, "Cell kind")->check(CLI::IsMember({"encoder", "decoder"}));
  nasd->add_option("--depth", depth, "Backbone depth");
  nasd->add_option("--base-channels", base_channels, "Backbone base width");

  auto* ds = app.add_subcommand("dataset", "Run the full batch pipeline");
  add_common(ds, common);

  auto* ren = app.add_subcommand("render", "Render an F32R raster as an 8-bit PGM");
  add_common(ren, common);
  ren->add_option("input", input, "F32R file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*gen) return cmd_gen_velocity(common);
    if (*fwd) return cmd_forward(common, geom, model_path);
    if (*rtm) return cmd_rtm(common, geom, model_path, gather_dir, partials);
    if (*met) return cmd_metrics(common, file_a, file_b, lambda, norm, window, window_size);
    if (*prn) return cmd_prune(common, input, fraction);
    if (*nasd) return cmd_nas(common, alpha_path, nodes, kind, depth, base_channels);
    if (*ds) return cmd_dataset(common);
    if (*ren) return cmd_render(common, input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
