#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vltm/errors.hpp"
#include "vltm/io/scene_json.hpp"
#include "vltm/ltm.hpp"
#include "vltm/voxel_grid.hpp"
#include "vltm/wave.hpp"

namespace vltm::io {

enum class EpsilonMode { relative, absolute };

/// One config file drives the whole pipeline: `simulate` writes the impulse
/// file that the imaging stages read, and every stage drops its artifacts
/// into output_dir under fixed names.
struct RunConfig {
  std::optional<std::string> impulse_path;
  std::optional<std::string> scene_path;
  std::optional<std::string> output_dir;
  WaveParams wave = WaveParams::from_wavelength(0.25);
  std::optional<VoxelGrid> grid;
  EpsilonMode epsilon_mode = EpsilonMode::relative;
  double epsilon_value = 0.05;
  std::vector<BandInterval> bands;
  GateKind gate = GateKind::Gaussian;
  bool sources_all = true;
  std::vector<std::array<std::size_t, 3>> sources;
  unsigned threads = 1;

  const std::string& require_impulse() const {
    if (!impulse_path) throw config_error("config: missing key \"impulse\"");
    return *impulse_path;
  }
  const std::string& require_scene() const {
    if (!scene_path) throw config_error("config: missing key \"scene\"");
    return *scene_path;
  }
  const std::string& require_output_dir() const {
    if (!output_dir) throw config_error("config: missing key \"output_dir\"");
    return *output_dir;
  }
  const VoxelGrid& require_grid() const {
    if (!grid) throw config_error("config: missing key \"grid\"");
    return *grid;
  }
  const std::vector<BandInterval>& require_bands() const {
    if (bands.empty()) throw config_error("config: missing key \"bands\"");
    return bands;
  }
};

namespace detail {

inline double band_endpoint(const nlohmann::json& v, const std::string& context) {
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  if (v.is_string() && v.get<std::string>() == "inf")
    return std::numeric_limits<double>::infinity();
  return get_number(v, context);
}

}  // namespace detail

/// Parse band intervals from "a:b,b:c,c:inf" (meters, half-open).
inline std::vector<BandInterval> parse_intervals(const std::string& text) {
  std::vector<BandInterval> bands;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(start, comma - start);
    const std::size_t colon = item.find(':');
    if (item.empty() || colon == std::string::npos)
      throw config_error("intervals: expected \"min:max\" pairs, got \"" + item + "\"");
    try {
      const std::string lo = item.substr(0, colon);
      const std::string hi = item.substr(colon + 1);
      BandInterval band;
      band.d_min = std::stod(lo);
      band.d_max = hi == "inf" ? std::numeric_limits<double>::infinity() : std::stod(hi);
      bands.push_back(band);
    } catch (const std::exception&) {
      throw config_error("intervals: cannot parse \"" + item + "\"");
    }
    start = comma + 1;
  }
  if (bands.empty()) throw config_error("intervals: empty interval list");
  return bands;
}

inline RunConfig parse_run_config(const nlohmann::json& root) {
  using detail::check_keys;
  using detail::get_count;
  using detail::get_number;
  using detail::get_vec3;
  using detail::require_key;

  check_keys(root,
             {"impulse", "scene", "output_dir", "wave", "grid", "epsilon", "bands", "gate",
              "sources", "threads"},
             "config");
  RunConfig cfg;

  auto get_string = [](const nlohmann::json& v, const std::string& ctx) {
    if (!v.is_string()) throw config_error(ctx + ": expected a string");
    return v.get<std::string>();
  };

  if (root.contains("impulse")) cfg.impulse_path = get_string(root["impulse"], "config.impulse");
  if (root.contains("scene")) cfg.scene_path = get_string(root["scene"], "config.scene");
  if (root.contains("output_dir"))
    cfg.output_dir = get_string(root["output_dir"], "config.output_dir");

  if (root.contains("wave")) {
    const nlohmann::json& wave = root["wave"];
    check_keys(wave, {"wavelength", "sigma"}, "config.wave");
    const double lambda =
        get_number(require_key(wave, "wavelength", "config.wave"), "config.wave.wavelength");
    if (!(lambda > 0.0)) throw config_error("config.wave.wavelength: must be positive");
    cfg.wave = WaveParams::from_wavelength(lambda);
    if (wave.contains("sigma")) {
      cfg.wave.gate_sigma = get_number(wave["sigma"], "config.wave.sigma");
      if (!(cfg.wave.gate_sigma > 0.0)) throw config_error("config.wave.sigma: must be positive");
    }
  }

  if (root.contains("grid")) {
    const nlohmann::json& grid = root["grid"];
    check_keys(grid, {"origin", "counts", "pitch"}, "config.grid");
    VoxelGrid g;
    g.origin = get_vec3(require_key(grid, "origin", "config.grid"), "config.grid.origin");
    const nlohmann::json& counts = require_key(grid, "counts", "config.grid");
    if (!counts.is_array() || counts.size() != 3)
      throw config_error("config.grid.counts: expected an array of 3 integers");
    g.nx = get_count(counts[0], "config.grid.counts");
    g.ny = get_count(counts[1], "config.grid.counts");
    g.nz = get_count(counts[2], "config.grid.counts");
    g.pitch = get_number(require_key(grid, "pitch", "config.grid"), "config.grid.pitch");
    try {
      g.validate();
    } catch (const std::invalid_argument& e) {
      throw config_error(std::string("config.grid: ") + e.what());
    }
    cfg.grid = g;
  }

  if (root.contains("epsilon")) {
    const nlohmann::json& eps = root["epsilon"];
    check_keys(eps, {"mode", "value"}, "config.epsilon");
    const std::string mode = get_string(require_key(eps, "mode", "config.epsilon"),
                                        "config.epsilon.mode");
    if (mode == "relative")
      cfg.epsilon_mode = EpsilonMode::relative;
    else if (mode == "absolute")
      cfg.epsilon_mode = EpsilonMode::absolute;
    else
      throw config_error("config.epsilon.mode: expected \"relative\" or \"absolute\"");
    cfg.epsilon_value = get_number(require_key(eps, "value", "config.epsilon"),
                                   "config.epsilon.value");
    if (!(cfg.epsilon_value >= 0.0)) throw config_error("config.epsilon.value: must be >= 0");
  }

  if (root.contains("bands")) {
    const nlohmann::json& bands = root["bands"];
    if (!bands.is_array() || bands.empty())
      throw config_error("config.bands: expected a nonempty array of [min, max] pairs");
    for (std::size_t i = 0; i < bands.size(); ++i) {
      const std::string bctx = "config.bands[" + std::to_string(i) + "]";
      const nlohmann::json& b = bands[i];
      if (!b.is_array() || b.size() != 2)
        throw config_error(bctx + ": expected [min, max]");
      cfg.bands.push_back(BandInterval{get_number(b[0], bctx),
                                       detail::band_endpoint(b[1], bctx)});
    }
  }

  if (root.contains("gate")) {
    const std::string gate = get_string(root["gate"], "config.gate");
    if (gate == "two-bounce")
      cfg.gate = GateKind::Gaussian;
    else if (gate == "higher")
      cfg.gate = GateKind::HigherOrderComplement;
    else
      throw config_error("config.gate: expected \"two-bounce\" or \"higher\"");
  }

  if (root.contains("sources")) {
    const nlohmann::json& sources = root["sources"];
    if (sources.is_string() && sources.get<std::string>() == "all") {
      cfg.sources_all = true;
    } else if (sources.is_array()) {
      cfg.sources_all = false;
      for (std::size_t i = 0; i < sources.size(); ++i) {
        const std::string sctx = "config.sources[" + std::to_string(i) + "]";
        const nlohmann::json& s = sources[i];
        if (!s.is_array() || s.size() != 3)
          throw config_error(sctx + ": expected [ix, iy, iz]");
        cfg.sources.push_back({get_count(s[0], sctx), get_count(s[1], sctx), get_count(s[2], sctx)});
      }
      if (cfg.sources.empty()) throw config_error("config.sources: empty source list");
    } else {
      throw config_error("config.sources: expected \"all\" or an array of voxel coordinates");
    }
  }

  if (root.contains("threads")) {
    const nlohmann::json& threads = root["threads"];
    if (!threads.is_number_unsigned())
      throw config_error("config.threads: expected a nonnegative integer");
    cfg.threads = threads.get<unsigned>();
  }

  return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
  return parse_run_config(detail::parse_file(path, "config file"));
}

}  // namespace vltm::io
