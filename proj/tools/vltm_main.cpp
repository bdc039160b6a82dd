#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vltm/vltm.hpp"

namespace {

using vltm::io::RunConfig;

// Fixed artifact names inside output_dir keep the pipeline deterministic
// and the stages composable without extra plumbing flags.
constexpr const char* kDirectImage = "direct.ndir";
constexpr const char* kDirectPgm = "direct.pgm";
constexpr const char* kMask = "mask.nmsk";
constexpr const char* kMaskPgm = "mask.pgm";
constexpr const char* kIndirectImage = "indirect.ndir";
constexpr const char* kIndirectPgm = "indirect.pgm";
constexpr const char* kMatrixCsv = "ltm.csv";
constexpr const char* kMatrixBin = "ltm.nltm";

std::string artifact_path(const RunConfig& cfg, const std::string& name) {
  const std::filesystem::path dir = cfg.require_output_dir();
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::vector<std::size_t> resolve_sources(const RunConfig& cfg, const vltm::VoxelGrid& grid) {
  std::vector<std::size_t> sources;
  if (cfg.sources_all) {
    sources.resize(grid.count());
    for (std::size_t v = 0; v < sources.size(); ++v) sources[v] = v;
    return sources;
  }
  for (const auto& c : cfg.sources) {
    if (c[0] >= grid.nx || c[1] >= grid.ny || c[2] >= grid.nz)
      throw vltm::config_error("config.sources: voxel coordinate out of grid range");
    sources.push_back(grid.flat_index(c[0], c[1], c[2]));
  }
  return sources;
}

double resolve_epsilon(const RunConfig& cfg, const vltm::DirectImage& img) {
  return cfg.epsilon_mode == vltm::io::EpsilonMode::relative
             ? vltm::relative_epsilon(img, cfg.epsilon_value)
             : cfg.epsilon_value;
}

std::vector<double> mask_as_values(const vltm::OccupancyMask& mask) {
  std::vector<double> values(mask.bits.size(), 0.0);
  for (std::size_t v = 0; v < mask.bits.size(); ++v) values[v] = mask.bits[v] ? 1.0 : 0.0;
  return values;
}

void cmd_simulate(const RunConfig& cfg) {
  const vltm::SceneDescription scene = vltm::io::load_scene(cfg.require_scene());
  vltm::SimulationResult sim = vltm::simulate_impulse_response(scene, cfg.threads);
  if (scene.noise) sim.response = vltm::apply_noise(sim.response, *scene.noise);
  vltm::io::write_nlir(sim.response, cfg.require_impulse());
  std::cout << "wrote " << cfg.require_impulse() << "\n"
            << "pairs=" << scene.relay.laser_count() * scene.relay.spad_count()
            << " bins=" << scene.time_axis.bin_count
            << " truncated_paths=" << sim.truncated_paths << "\n";
}

void cmd_direct(const RunConfig& cfg) {
  const vltm::ImpulseResponse h = vltm::io::read_nlir(cfg.require_impulse());
  const vltm::DirectImage img =
      vltm::compute_direct(h, cfg.require_grid(), cfg.wave, cfg.threads);
  vltm::io::write_direct_image(img, artifact_path(cfg, kDirectImage));
  vltm::io::export_image(img.values, img.grid, 1, artifact_path(cfg, kDirectPgm));
  std::cout << "wrote " << artifact_path(cfg, kDirectImage) << "\n"
            << "argmax_voxel=" << img.argmax() << "\n";
}

void cmd_column(const RunConfig& cfg, const std::vector<std::size_t>& focus,
                const std::string& gate_override) {
  if (focus.size() != 3) throw vltm::config_error("--focus: expected ix,iy,iz");
  const vltm::VoxelGrid& grid = cfg.require_grid();
  if (focus[0] >= grid.nx || focus[1] >= grid.ny || focus[2] >= grid.nz)
    throw vltm::config_error("--focus: voxel coordinate out of grid range");
  vltm::GateKind gate = cfg.gate;
  if (gate_override == "two-bounce") gate = vltm::GateKind::Gaussian;
  if (gate_override == "higher") gate = vltm::GateKind::HigherOrderComplement;

  const vltm::ImpulseResponse h = vltm::io::read_nlir(cfg.require_impulse());
  const std::size_t a = grid.flat_index(focus[0], focus[1], focus[2]);
  const std::vector<double> column =
      vltm::compute_column(h, grid, cfg.wave, a, gate, cfg.threads);

  const std::string stem = "column_" + std::to_string(focus[0]) + "_" + std::to_string(focus[1]) +
                           "_" + std::to_string(focus[2]);
  vltm::io::write_direct_image(vltm::DirectImage{grid, column},
                               artifact_path(cfg, stem + ".ndir"));
  vltm::io::export_image(column, grid, 1, artifact_path(cfg, stem + ".pgm"));
  std::cout << "wrote " << artifact_path(cfg, stem + ".ndir") << "\n";
}

void cmd_mask(const RunConfig& cfg) {
  const vltm::DirectImage img = vltm::io::read_direct_image(artifact_path(cfg, kDirectImage));
  const vltm::OccupancyMask mask = vltm::occupancy_from_direct(img, resolve_epsilon(cfg, img));
  vltm::io::write_mask(mask, artifact_path(cfg, kMask));
  vltm::io::export_image(mask_as_values(mask), mask.grid, 1, artifact_path(cfg, kMaskPgm));
  std::cout << "wrote " << artifact_path(cfg, kMask) << "\n"
            << "epsilon=" << mask.epsilon << " occupied=" << mask.occupied_count() << "\n";
}

void cmd_indirect_all(const RunConfig& cfg) {
  const vltm::ImpulseResponse h = vltm::io::read_nlir(cfg.require_impulse());
  const vltm::OccupancyMask mask = vltm::io::read_mask(artifact_path(cfg, kMask));
  const vltm::DirectImage img = vltm::accumulate_in_focus_indirect(
      h, cfg.require_grid(), cfg.wave, mask, cfg.threads, cfg.gate);
  vltm::io::write_direct_image(img, artifact_path(cfg, kIndirectImage));
  vltm::io::export_image(img.values, img.grid, 1, artifact_path(cfg, kIndirectPgm));
  std::cout << "wrote " << artifact_path(cfg, kIndirectImage) << "\n";
}

void cmd_ltm(const RunConfig& cfg, bool masked) {
  const vltm::ImpulseResponse h = vltm::io::read_nlir(cfg.require_impulse());
  const vltm::VoxelGrid& grid = cfg.require_grid();
  const std::vector<std::size_t> sources = resolve_sources(cfg, grid);

  vltm::TransportMatrix t;
  if (masked) {
    const vltm::OccupancyMask mask = vltm::io::read_mask(artifact_path(cfg, kMask));
    t = vltm::assemble_ltm(h, grid, cfg.wave, sources, cfg.gate, &mask, cfg.threads);
  } else {
    t = vltm::assemble_ltm(h, grid, cfg.wave, sources, cfg.gate, nullptr, cfg.threads);
  }
  vltm::io::export_matrix(t, artifact_path(cfg, kMatrixCsv));
  std::cout << "wrote " << artifact_path(cfg, kMatrixCsv) << "\n"
            << "columns=" << t.columns.size() << " nonzeros=" << t.stored_nonzeros() << "\n";
}

void cmd_bands(const RunConfig& cfg, const std::string& intervals_text) {
  const vltm::TransportMatrix t = vltm::io::read_matrix(artifact_path(cfg, kMatrixBin));
  const std::vector<vltm::BandInterval> intervals =
      intervals_text.empty() ? cfg.require_bands() : vltm::io::parse_intervals(intervals_text);
  const std::vector<vltm::TransportMatrix> bands = vltm::band_decompose(t, intervals);
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const std::string stem = "band_" + std::to_string(i);
    vltm::io::export_matrix(bands[i], artifact_path(cfg, stem + ".csv"));
    std::cout << "wrote " << artifact_path(cfg, stem + ".csv")
              << " nonzeros=" << bands[i].stored_nonzeros() << "\n";
  }
}

void print_grid(const vltm::VoxelGrid& g) {
  std::printf("grid_counts=%zu %zu %zu\n", g.nx, g.ny, g.nz);
  std::printf("grid_origin=%.17g %.17g %.17g\n", g.origin.x, g.origin.y, g.origin.z);
  std::printf("grid_pitch=%.17g\n", g.pitch);
}

void cmd_info(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("info: cannot open " + path);
  const std::string magic = vltm::io::peek_magic(probe);
  probe.close();

  if (magic == "NLIR") {
    const vltm::ImpulseResponse h = vltm::io::read_nlir(path);
    std::printf("format=NLIR v1\n");
    std::printf("K_p=%zu\nK_i=%zu\nbins=%zu\n", h.topology.laser_count(), h.topology.spad_count(),
                h.time_axis.bin_count);
    std::printf("bin_width=%.17g\norigin=%.17g\n", h.time_axis.bin_width, h.time_axis.origin);
    std::printf("wall_normal=%g %g %g\n", h.topology.wall_normal.x, h.topology.wall_normal.y,
                h.topology.wall_normal.z);
  } else if (magic == "NDIR") {
    const vltm::DirectImage img = vltm::io::read_direct_image(path);
    std::printf("format=NDIR v1\n");
    print_grid(img.grid);
    std::printf("argmax_voxel=%zu\n", img.argmax());
  } else if (magic == "NMSK") {
    const vltm::OccupancyMask mask = vltm::io::read_mask(path);
    std::printf("format=NMSK v1\n");
    print_grid(mask.grid);
    std::printf("epsilon=%.17g\noccupied=%zu\n", mask.epsilon, mask.occupied_count());
  } else if (magic == "NLTM") {
    const vltm::TransportMatrix t = vltm::io::read_matrix(path);
    const char* kinds[] = {"naive", "gated_2bounce", "gated_higher", "masked"};
    std::printf("format=NLTM v1\n");
    std::printf("kind=%s\n", kinds[static_cast<int>(t.kind)]);
    print_grid(t.grid);
    std::printf("columns=%zu\nnonzeros=%zu\n", t.columns.size(), t.stored_nonzeros());
  } else {
    throw vltm::format_error(vltm::format_error::kind::bad_magic,
                             "info: unrecognized magic in " + path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transient NLOS toolkit: simulate relay-wall impulse responses and probe the "
               "hidden scene's virtual light transport matrix"};
  app.require_subcommand(1);

  std::string config_path;
  std::string info_path;
  std::vector<std::size_t> focus;
  std::string gate_override;
  std::string intervals_text;
  bool masked = false;

  CLI::App* simulate = app.add_subcommand("simulate", "render a scene to an NLIR impulse file");
  CLI::App* direct = app.add_subcommand("direct", "confocal direct image (LTM diagonal)");
  CLI::App* column = app.add_subcommand("column", "one LTM column from a source voxel");
  CLI::App* mask = app.add_subcommand("mask", "occupancy mask from the direct image");
  CLI::App* indirect_all =
      app.add_subcommand("indirect-all", "accumulate in-focus indirect light over the mask");
  CLI::App* ltm = app.add_subcommand("ltm", "assemble the light transport matrix");
  CLI::App* bands = app.add_subcommand("bands", "split the matrix by source-destination distance");
  CLI::App* info = app.add_subcommand("info", "inspect a binary artifact header");

  for (CLI::App* sub : {simulate, direct, column, mask, indirect_all, ltm, bands})
    sub->add_option("-c,--config", config_path, "run configuration (JSON)")->required();
  column->add_option("--focus", focus, "source voxel ix,iy,iz")->required()->delimiter(',');
  column->add_option("--gate", gate_override, "gate kind")
      ->check(CLI::IsMember({"two-bounce", "higher"}));
  ltm->add_flag("--masked", masked, "restrict to mask-occupied voxel pairs");
  bands->add_option("--intervals", intervals_text, "a:b,b:c,... meters, overrides config");
  info->add_option("file", info_path, "artifact path")->required();

  try {
    app.parse(argc, argv);
    if (info->parsed()) {
      cmd_info(info_path);
      return 0;
    }
    const RunConfig cfg = vltm::io::load_run_config(config_path);
    if (simulate->parsed()) cmd_simulate(cfg);
    if (direct->parsed()) cmd_direct(cfg);
    if (column->parsed()) cmd_column(cfg, focus, gate_override);
    if (mask->parsed()) cmd_mask(cfg);
    if (indirect_all->parsed()) cmd_indirect_all(cfg);
    if (ltm->parsed()) cmd_ltm(cfg, masked);
    if (bands->parsed()) cmd_bands(cfg, intervals_text);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const vltm::format_error& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 3;
  } catch (const vltm::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
