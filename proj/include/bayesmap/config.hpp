// Experiment configuration files for the command-line tool.
#ifndef BAYESMAP_CONFIG_HPP
#define BAYESMAP_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bayesmap/io.hpp"

namespace bayesmap {

struct HypoConfig {
  std::vector<double> nu;
  std::vector<Interval> boxes;
  std::vector<Interval> opens;
};

/// Parsed config. Only `density` is required, and only for commands that
/// need one; every other field has a default chosen by the command.
struct ExperimentConfig {
  std::optional<io::json> density;
  std::filesystem::path base_dir;
  std::optional<std::vector<double>> ladder;
  std::optional<SearchBox> search_box;
  MaximizeOptions tolerances;
  std::optional<std::string> output;
  std::uint64_t seed = 0;
  std::optional<double> c;
  std::optional<Point> theta;
  std::optional<std::vector<double>> alpha_grid;
  std::optional<int> nu_max;
  std::optional<HypoConfig> hypo;
};

namespace detail {

inline double cfg_number(const io::json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

inline std::vector<double> cfg_numbers(const io::json& v, const std::string& what) {
  if (!v.is_array()) throw ConfigError(what + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(cfg_number(x, what));
  return out;
}

inline Interval cfg_interval(const io::json& v, const std::string& what) {
  const auto xs = cfg_numbers(v, what);
  if (xs.size() != 2) throw ConfigError(what + " must be [lo, hi]");
  if (!(xs[0] < xs[1])) throw ConfigError(what + " needs lo < hi");
  return {xs[0], xs[1]};
}

inline SearchBox cfg_box(const io::json& v) {
  if (!v.is_array() || v.empty()) throw ConfigError("search_box must be [lo, hi] or [[lo, hi], [lo, hi]]");
  if (v[0].is_array()) {
    std::vector<Interval> axes;
    for (const auto& a : v) axes.push_back(cfg_interval(a, "search_box axis"));
    if (axes.size() > 2) throw ConfigError("search_box has more than two axes");
    return Box(std::move(axes));
  }
  const Interval I = cfg_interval(v, "search_box");
  return Box(I.lo, I.hi);
}

inline std::vector<double> cfg_ladder(const io::json& v) {
  std::vector<double> out;
  if (v.is_array()) {
    out = cfg_numbers(v, "ladder");
  } else if (v.is_object()) {
    for (const auto& [k, x] : v.items())
      if (k != "base" && k != "factor" && k != "count") throw ConfigError("unknown key '" + k + "' in ladder");
    if (!v.contains("base") || !v.contains("factor") || !v.contains("count"))
      throw ConfigError("ladder object needs base, factor and count");
    if (!v.at("count").is_number_integer()) throw ConfigError("ladder count must be an integer");
    const double base = cfg_number(v.at("base"), "ladder base");
    const double factor = cfg_number(v.at("factor"), "ladder factor");
    const int count = v.at("count").get<int>();
    if (count < 1 || count > 64) throw ConfigError("ladder count must be in 1..64");
    out = geometric_ladder(base, factor, count);
  } else {
    throw ConfigError("ladder must be a list or {base, factor, count}");
  }
  if (out.empty()) throw ConfigError("ladder must be nonempty");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] > 0.0) || !std::isfinite(out[i])) throw ConfigError("ladder values must be positive");
    if (i > 0 && !(out[i] > out[i - 1])) throw ConfigError("ladder must be strictly increasing");
  }
  return out;
}

}  // namespace detail

inline ExperimentConfig parse_config(const io::json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  for (const auto& [key, v] : j.items()) {
    if (key == "density") {
      cfg.density = v;
    } else if (key == "ladder") {
      cfg.ladder = detail::cfg_ladder(v);
    } else if (key == "search_box") {
      cfg.search_box = detail::cfg_box(v);
    } else if (key == "tolerances") {
      if (!v.is_object()) throw ConfigError("tolerances must be an object");
      for (const auto& [tk, tv] : v.items()) {
        if (tk == "value") {
          const double t = detail::cfg_number(tv, "tolerances.value");
          if (!(t >= 0.0)) throw ConfigError("tolerances.value must be >= 0");
          cfg.tolerances.tol_value = t;
        } else if (tk == "scan_step_fraction") {
          const double t = detail::cfg_number(tv, "tolerances.scan_step_fraction");
          if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("tolerances.scan_step_fraction must be in [0, 1]");
          cfg.tolerances.scan_step_fraction = t;
        } else {
          throw ConfigError("unknown key '" + tk + "' in tolerances");
        }
      }
    } else if (key == "output") {
      if (!v.is_string()) throw ConfigError("output must be a path string");
      cfg.output = v.get<std::string>();
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError("seed must be a nonnegative integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "c") {
      cfg.c = detail::cfg_number(v, "c");
      if (!(*cfg.c > 0.0)) throw ConfigError("c must be positive");
    } else if (key == "theta") {
      cfg.theta = v.is_array() ? detail::cfg_numbers(v, "theta") : Point{detail::cfg_number(v, "theta")};
    } else if (key == "alpha_grid") {
      cfg.alpha_grid = detail::cfg_numbers(v, "alpha_grid");
      if (cfg.alpha_grid->empty()) throw ConfigError("alpha_grid must be nonempty");
    } else if (key == "nu_max") {
      if (!v.is_number_integer() || v.get<int>() < 1 || v.get<int>() > 30)
        throw ConfigError("nu_max must be an integer in 1..30");
      cfg.nu_max = v.get<int>();
    } else if (key == "hypo") {
      if (!v.is_object()) throw ConfigError("hypo must be an object");
      HypoConfig h;
      for (const auto& [hk, hv] : v.items()) {
        if (hk == "nu") {
          h.nu = detail::cfg_numbers(hv, "hypo.nu");
        } else if (hk == "boxes" || hk == "opens") {
          if (!hv.is_array()) throw ConfigError("hypo." + hk + " must be a list of [lo, hi]");
          for (const auto& iv : hv) (hk == "boxes" ? h.boxes : h.opens).push_back(detail::cfg_interval(iv, "hypo." + hk));
        } else {
          throw ConfigError("unknown key '" + hk + "' in hypo");
        }
      }
      cfg.hypo = std::move(h);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(io::read_json_file(path), path.parent_path());
}

}  // namespace bayesmap

#endif  // BAYESMAP_CONFIG_HPP
