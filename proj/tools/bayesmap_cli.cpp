// bayesmap: MAP and 0-1 loss Bayes estimates, sweeps, condition checks and
// the counterexample suite from the command line.
//
// Exit codes: 0 success, 2 bad config or input, 3 domain error, 4 internal
// invariant violation.
#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "bayesmap/bayesmap.hpp"
#include "bayesmap/config.hpp"
#include "bayesmap/io.hpp"

namespace fs = std::filesystem;
using namespace bayesmap;
using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitInternal = 4;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int dump_max_bump = counterexample::kDefaultMaxBump;
};

struct Context {
  ExperimentConfig cfg;
  fs::path out_dir;
};

Context make_context(const Options& o, bool config_required) {
  Context ctx;
  if (!o.config.empty())
    ctx.cfg = load_config(o.config);
  else if (config_required)
    throw ConfigError("--config is required for this command");
  if (o.seed) ctx.cfg.seed = *o.seed;
  ctx.out_dir = !o.out.empty() ? fs::path(o.out) : ctx.cfg.output ? fs::path(*ctx.cfg.output) : fs::path(".");
  fs::create_directories(ctx.out_dir);
  return ctx;
}

Density require_density(const ExperimentConfig& cfg) {
  if (!cfg.density) throw ConfigError("config needs a 'density'");
  return io::parse_density(*cfg.density, cfg.base_dir);
}

SearchBox box_for(const ExperimentConfig& cfg, const Density& d) {
  SearchBox box = cfg.search_box ? *cfg.search_box : support_box(d);
  if (box.dim() != dimension(d)) throw ConfigError("search_box dimension does not match the density");
  return box;
}

json box_to_json(const SearchBox& b) { return io::box_json(b); }

std::vector<double> ladder_for(const ExperimentConfig& cfg) {
  if (cfg.ladder) return *cfg.ladder;
  return default_ladder(cfg.nu_max.value_or(6));
}

int cmd_map(const Options& o) {
  auto ctx = make_context(o, true);
  const Density d = require_density(ctx.cfg);
  const SearchBox box = box_for(ctx.cfg, d);
  const ArgmaxResult r = map_estimate(d, box, ctx.cfg.tolerances);
  io::write_json(ctx.out_dir / "map.json",
                 {{"estimator", "MAP"}, {"search_box", box_to_json(box)}, {"result", io::to_json(r)}});
  return kExitOk;
}

int cmd_bayes(const Options& o) {
  auto ctx = make_context(o, true);
  const Density d = require_density(ctx.cfg);
  const SearchBox box = box_for(ctx.cfg, d);
  const double c = ctx.cfg.c ? *ctx.cfg.c : ladder_for(ctx.cfg).front();
  const LossSpec loss(c);
  const ArgmaxResult r = bayes_estimate(d, loss, box, ctx.cfg.tolerances);
  json j = {{"estimator", "bayes_0_1"},
            {"c", c},
            {"radius", loss.radius()},
            {"search_box", box_to_json(box)},
            {"result", io::to_json(r)}};
  const ArgmaxResult map = map_estimate(d, box, ctx.cfg.tolerances);
  j["map_canonical"] = io::point_json(map.canonical);
  j["dist_to_map"] = io::num(map.distance_to(r.canonical));
  if (!map.sup_infinite) j["gap_at_map"] = io::to_json(approx_gap(d, loss, map.canonical, box, ctx.cfg.tolerances));
  if (ctx.cfg.theta) j["gap_at_theta"] = io::to_json(approx_gap(d, loss, *ctx.cfg.theta, box, ctx.cfg.tolerances));
  io::write_json(ctx.out_dir / "bayes.json", j);
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  auto ctx = make_context(o, true);
  const Density d = require_density(ctx.cfg);
  const SearchBox box = box_for(ctx.cfg, d);
  const SweepTrace t = sweep(d, ladder_for(ctx.cfg), box, ctx.cfg.tolerances);
  io::write_text(ctx.out_dir / "sweep.csv", io::sweep_csv(t));
  json v = io::verdict_json(t);
  v["search_box"] = box_to_json(box);
  io::write_json(ctx.out_dir / "verdict.json", v);
  return kExitOk;
}

std::vector<double> default_alpha_grid(const Density& d) {
  const ArgmaxResult m = map_estimate(d, support_box(d));
  const double top = m.sup_infinite ? 1.0 : m.sup_value;
  std::vector<double> grid;
  for (int k = 1; k <= 9; ++k) grid.push_back(top * k / 10.0);
  return grid;
}

int cmd_check(const Options& o) {
  auto ctx = make_context(o, true);
  const Density d = require_density(ctx.cfg);
  const auto grid = ctx.cfg.alpha_grid ? *ctx.cfg.alpha_grid : default_alpha_grid(d);
  const ConditionReport r = check_conditions(d, grid, ctx.cfg.seed);
  json j = io::to_json(r);
  j["seed"] = ctx.cfg.seed;
  io::write_json(ctx.out_dir / "conditions.json", j);
  return kExitOk;
}

int cmd_hypo(const Options& o) {
  auto ctx = make_context(o, true);
  const Density d = require_density(ctx.cfg);
  const SearchBox box = box_for(ctx.cfg, d);
  HypoConfig h = ctx.cfg.hypo.value_or(HypoConfig{});
  if (h.nu.empty()) h.nu = {1, 2, 4, 8, 16, 32, 64};
  if (h.boxes.empty()) h.boxes = {box.axis(0)};
  if (h.opens.empty()) h.opens = {box.axis(0)};
  const HypoReport rep = hypo_diagnostic(d, h.nu, h.boxes, h.opens, ctx.cfg.tolerances);
  io::write_json(ctx.out_dir / "hypo.json", io::to_json(rep));
  return kExitOk;
}

json knot_summary(const UscDensity1D& f, int max_bump) {
  const auto knots = counterexample::knot_continuity(f, max_bump);
  std::size_t bad = 0;
  for (const auto& k : knots)
    if (!k.continuous) ++bad;
  int resolved = 0;
  for (int n = 1; n <= max_bump; ++n)
    if (counterexample::bump_knots(n).resolved) resolved = n;
  return {{"knots_checked", knots.size()}, {"discontinuous", bad}, {"bumps_with_resolved_ramps", resolved}};
}

int cmd_counterexample(const Options& o) {
  auto ctx = make_context(o, false);
  const int nu_max = ctx.cfg.nu_max.value_or(4);
  int max_bump = std::max(counterexample::kDefaultMaxBump, 2 * nu_max);
  if (ctx.cfg.density) {
    const auto& dj = *ctx.cfg.density;
    if (!dj.is_object() || !dj.contains("counterexample"))
      throw ConfigError("the counterexample command builds its own density; use {\"counterexample\": {...}}");
    max_bump = counterexample::Spec{}.max_bump;
    const auto& c = dj.at("counterexample");
    if (c.is_object() && c.contains("max_bump")) {
      if (!c.at("max_bump").is_number_integer()) throw ConfigError("max_bump must be an integer");
      max_bump = c.at("max_bump").get<int>();
    }
  }
  const UscDensity1D f = counterexample::build({max_bump});
  const SearchBox box = ctx.cfg.search_box ? *ctx.cfg.search_box : Box(-1.0, 2.0 * nu_max + 1.0);
  const auto rep = counterexample::verify_nonconvergence(f, max_bump, nu_max, box, ctx.cfg.tolerances);

  io::write_json(ctx.out_dir / "counterexample_density.json", io::to_json(f));
  io::write_text(ctx.out_dir / "domination.csv", io::domination_csv(rep));
  io::write_text(ctx.out_dir / "sweep.csv", io::sweep_csv(rep.trace));
  json v = io::verdict_json(rep.trace);
  v["search_box"] = box_to_json(box);
  v["max_bump"] = max_bump;
  v["map_is_origin"] = rep.map_is_origin;
  v["all_bayes_outside_center"] = rep.all_outside;
  bool dominated = true;
  for (const auto& r : rep.rows) dominated = dominated && r.plateau_objective > r.origin_value;
  v["plateau_dominates_origin"] = dominated;
  v["total_mass"] = f.total_mass();
  v["omitted_mass"] = counterexample::omitted_mass(max_bump);
  v["continuity"] = knot_summary(f, max_bump);
  io::write_json(ctx.out_dir / "verdict.json", v);
  return kExitOk;
}

int cmd_dump(const Options& o) {
  fs::path out = o.out.empty() ? fs::path(".") : fs::path(o.out);
  fs::create_directories(out);
  const UscDensity1D f = counterexample::build({o.dump_max_bump});
  io::write_json(out / "counterexample_density.json", io::to_json(f));
  std::ostringstream os;
  os << "theta,value\n";
  const long n = std::lround((o.dump_max_bump + 2.0) / 1e-3);
  for (long i = 0; i <= n; ++i) {
    const double t = -1.0 + static_cast<double>(i) * 1e-3;
    os << io::fmt17(t) << ',' << io::fmt17(f.evaluate(t)) << '\n';
  }
  io::write_text(out / "counterexample_samples.csv", os.str());
  return kExitOk;
}

int guarded(int (*fn)(const Options&), const Options& o) {
  try {
    return fn(o);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInternal;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MAP and 0-1 loss Bayes estimators for upper semicontinuous densities"};
  app.require_subcommand(1);
  Options o;
  int (*selected)(const Options&) = nullptr;

  auto common = [&](CLI::App* sub, bool need_config) {
    auto* c = sub->add_option("--config", o.config, "experiment config (JSON)");
    if (need_config) c->required();
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--seed", o.seed, "seed for randomized diagnostics");
  };
  struct Entry {
    const char* name;
    const char* help;
    int (*fn)(const Options&);
  };
  const Entry entries[] = {
      {"map", "MAP estimate -> map.json", cmd_map},
      {"bayes", "Bayes estimate under 0-1 loss -> bayes.json", cmd_bayes},
      {"sweep", "Bayes estimates along a ladder of c -> sweep.csv, verdict.json", cmd_sweep},
      {"check", "level-set, quasiconcavity and log-concavity checks -> conditions.json", cmd_check},
      {"hypo", "finite hypo-convergence diagnostic of the mollified densities -> hypo.json", cmd_hypo},
  };
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    common(sub, true);
    sub->callback([&selected, fn = e.fn] { selected = fn; });
  }
  auto* ce = app.add_subcommand("counterexample", "non-convergence suite -> domination.csv, verdict.json");
  common(ce, false);
  ce->callback([&] {
    if (!selected) selected = cmd_counterexample;
  });
  auto* dump = ce->add_subcommand("dump", "write the density and a theta,value sampling");
  dump->add_option("--max-bump", o.dump_max_bump, "number of bumps")->check(CLI::Range(1, 60));
  dump->add_option("--out", o.out, "output directory");
  dump->callback([&] { selected = cmd_dump; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  return selected ? guarded(selected, o) : kExitConfig;
}
