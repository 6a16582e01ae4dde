// JSON and CSV serialization of densities and results. Needs nlohmann/json
// (vendor/json.hpp) on the include path.
#ifndef BAYESMAP_IO_HPP
#define BAYESMAP_IO_HPP

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bayesmap/conditions.hpp"
#include "bayesmap/counterexample.hpp"
#include "bayesmap/hypo.hpp"
#include "bayesmap/sweep.hpp"

namespace bayesmap::io {

using json = nlohmann::ordered_json;

/// Round-trippable decimal form used in every CSV file.
inline std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// JSON value for a double; non-finite values become strings so nothing is lost.
inline json num(double x) {
  if (std::isfinite(x)) return x;
  return fmt17(x);
}

inline json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in " + p.string() + ": " + e.what());
  }
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
  if (!out) throw Error("failed writing " + p.string());
}

inline void write_json(const std::filesystem::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

// ---------------------------------------------------------------------------
// Reading densities
// ---------------------------------------------------------------------------

namespace detail {

inline void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw InvalidDensity("unknown key '" + k + "' in " + where);
}

inline double get_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InvalidDensity("missing '" + std::string(key) + "' in " + where);
  const auto& v = j.at(key);
  if (!v.is_number()) throw InvalidDensity("'" + std::string(key) + "' must be a number in " + where);
  return v.get<double>();
}

inline std::vector<double> get_numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw InvalidDensity(where + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw InvalidDensity(where + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline Piece parse_piece(const json& j, std::size_t index) {
  const std::string where = "piece " + std::to_string(index);
  if (!j.is_object()) throw InvalidDensity(where + " must be an object");
  reject_unknown(j, {"lo", "hi", "kind", "params"}, where);
  const double lo = get_number(j, "lo", where), hi = get_number(j, "hi", where);
  if (!j.contains("kind") || !j.at("kind").is_string()) throw InvalidDensity("missing 'kind' in " + where);
  if (!j.contains("params") || !j.at("params").is_object()) throw InvalidDensity("missing 'params' in " + where);
  const auto& p = j.at("params");
  switch (piece_kind_from_string(j.at("kind").get<std::string>())) {
    case PieceKind::constant:
      reject_unknown(p, {"k"}, where + " params");
      return Piece::constant(lo, hi, get_number(p, "k", where));
    case PieceKind::affine:
      reject_unknown(p, {"a", "b", "t0"}, where + " params");
      return Piece::affine(lo, hi, get_number(p, "a", where), get_number(p, "b", where),
                           p.contains("t0") ? get_number(p, "t0", where) : 0.0);
    case PieceKind::sqrt_affine: {
      reject_unknown(p, {"a", "b", "t0", "s"}, where + " params");
      const double s = get_number(p, "s", where);
      if (s != 1.0 && s != -1.0) throw InvalidDensity("'s' must be 1 or -1 in " + where);
      return Piece::sqrt_affine(lo, hi, get_number(p, "a", where), get_number(p, "b", where),
                                get_number(p, "t0", where), static_cast<int>(s));
    }
  }
  throw InvalidDensity("unknown piece kind in " + where);
}

inline Density parse_grid(const json& j) {
  reject_unknown(j, {"dim", "origin", "spacing", "values"}, "grid density");
  if (!j.at("dim").is_number_integer()) throw InvalidDensity("grid 'dim' must be 1 or 2");
  const int dim = j.at("dim").get<int>();
  if (!j.contains("values")) throw InvalidDensity("grid density needs 'values'");
  if (dim == 1) {
    return GridDensity::one_d(get_number(j, "origin", "grid density"), get_number(j, "spacing", "grid density"),
                              get_numbers(j.at("values"), "grid values"));
  }
  if (dim != 2) throw InvalidDensity("grid 'dim' must be 1 or 2");
  const auto origin = get_numbers(j.at("origin"), "grid origin");
  const auto spacing = get_numbers(j.at("spacing"), "grid spacing");
  if (origin.size() != 2 || spacing.size() != 2)
    throw InvalidDensity("2D grid needs two-element 'origin' and 'spacing'");
  const auto& rows = j.at("values");
  if (!rows.is_array() || rows.empty()) throw InvalidDensity("2D grid values must be a nonempty array of rows");
  std::vector<double> flat;
  std::size_t ny = 0;
  for (const auto& row : rows) {
    const auto r = get_numbers(row, "grid row");
    if (ny == 0) ny = r.size();
    if (r.size() != ny || ny == 0) throw InvalidDensity("2D grid rows must have equal nonzero length");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return GridDensity::two_d({origin[0], origin[1]}, {spacing[0], spacing[1]}, rows.size(), ny, std::move(flat));
}

}  // namespace detail

/// Density from its JSON form: a piece list, a grid, a counterexample
/// reference, or a string naming a JSON file relative to base_dir.
inline Density parse_density(const json& j, const std::filesystem::path& base_dir = {}, int depth = 0) {
  if (depth > 8) throw InvalidDensity("density file references nest too deeply");
  if (j.is_string()) {
    std::filesystem::path p = j.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return parse_density(read_json_file(p), p.parent_path(), depth + 1);
  }
  if (!j.is_object()) throw InvalidDensity("density must be an object or a file path");
  if (j.contains("counterexample")) {
    detail::reject_unknown(j, {"counterexample"}, "density");
    const auto& c = j.at("counterexample");
    counterexample::Spec spec;
    if (c.is_object()) {
      detail::reject_unknown(c, {"max_bump"}, "counterexample");
      if (c.contains("max_bump")) {
        if (!c.at("max_bump").is_number_integer()) throw InvalidDensity("max_bump must be an integer");
        spec.max_bump = c.at("max_bump").get<int>();
      }
    } else if (!(c.is_boolean() && c.get<bool>())) {
      throw InvalidDensity("'counterexample' must be an object or true");
    }
    return counterexample::build(spec);
  }
  if (j.contains("dim")) return detail::parse_grid(j);
  if (!j.contains("pieces")) throw InvalidDensity("density needs 'pieces', 'dim' or 'counterexample'");
  detail::reject_unknown(j, {"pieces", "normalize", "mass_tolerance", "unbounded_at", "omitted_tail"}, "density");
  const auto& arr = j.at("pieces");
  if (!arr.is_array()) throw InvalidDensity("'pieces' must be an array");
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < arr.size(); ++i) pieces.push_back(detail::parse_piece(arr[i], i));
  DensityOptions o;
  if (j.contains("mass_tolerance")) o.mass_tolerance = detail::get_number(j, "mass_tolerance", "density");
  if (j.contains("unbounded_at")) o.unbounded_at = detail::get_numbers(j.at("unbounded_at"), "unbounded_at");
  if (j.contains("omitted_tail")) {
    const auto& t = j.at("omitted_tail");
    detail::reject_unknown(t, {"start", "sup_value", "mass_bound"}, "omitted_tail");
    o.tail = OmittedTail{detail::get_number(t, "start", "omitted_tail"),
                         detail::get_number(t, "sup_value", "omitted_tail"),
                         detail::get_number(t, "mass_bound", "omitted_tail")};
  }
  const bool normalize = j.contains("normalize") && j.at("normalize").is_boolean() && j.at("normalize").get<bool>();
  if (normalize) return UscDensity1D::normalized(std::move(pieces), std::move(o));
  return UscDensity1D(std::move(pieces), std::move(o));
}

// ---------------------------------------------------------------------------
// Writing
// ---------------------------------------------------------------------------

inline json to_json(const Piece& p) {
  json params;
  switch (p.kind) {
    case PieceKind::constant: params = {{"k", p.a}}; break;
    case PieceKind::affine: params = {{"a", p.a}, {"b", p.b}, {"t0", p.t0}}; break;
    case PieceKind::sqrt_affine: params = {{"a", p.a}, {"b", p.b}, {"t0", p.t0}, {"s", p.s}}; break;
  }
  return {{"lo", p.lo}, {"hi", p.hi}, {"kind", to_string(p.kind)}, {"params", params}};
}

inline json to_json(const UscDensity1D& d) {
  json j;
  j["pieces"] = json::array();
  for (const auto& p : d.pieces()) j["pieces"].push_back(to_json(p));
  if (d.mass_tolerance() != kMassTolerance) j["mass_tolerance"] = d.mass_tolerance();
  if (!d.unbounded_at().empty()) j["unbounded_at"] = d.unbounded_at();
  if (d.tail())
    j["omitted_tail"] = {{"start", d.tail()->start}, {"sup_value", d.tail()->sup_value},
                         {"mass_bound", d.tail()->mass_bound}};
  return j;
}

inline json to_json(const GridDensity& g) {
  json j;
  j["dim"] = g.dim();
  if (g.dim() == 1) {
    j["origin"] = g.origin(0);
    j["spacing"] = g.spacing(0);
    j["values"] = g.values();
  } else {
    j["origin"] = {g.origin(0), g.origin(1)};
    j["spacing"] = {g.spacing(0), g.spacing(1)};
    json rows = json::array();
    for (std::size_t i = 0; i < g.shape(0); ++i) {
      json row = json::array();
      for (std::size_t k = 0; k < g.shape(1); ++k) row.push_back(g.value(i, k));
      rows.push_back(std::move(row));
    }
    j["values"] = std::move(rows);
  }
  return j;
}

inline json to_json(const Density& d) {
  return std::visit([](const auto& x) { return to_json(x); }, d);
}

inline json point_json(const Point& p) {
  if (p.size() == 1) return num(p[0]);
  json a = json::array();
  for (double x : p) a.push_back(num(x));
  return a;
}

inline json box_json(const Box& b) {
  if (b.dim() == 1) return json::array({num(b.axis(0).lo), num(b.axis(0).hi)});
  json lo = json::array(), hi = json::array();
  for (std::size_t a = 0; a < b.dim(); ++a) {
    lo.push_back(num(b.axis(a).lo));
    hi.push_back(num(b.axis(a).hi));
  }
  return {{"lo", lo}, {"hi", hi}};
}

inline json to_json(const ArgmaxResult& r) {
  json m = json::array();
  for (const auto& b : r.maximizers) m.push_back(box_json(b));
  return {{"sup_value", num(r.sup_value)},
          {"sup_infinite", r.sup_infinite},
          {"canonical", point_json(r.canonical)},
          {"maximizers", m},
          {"tol_value", r.tol_value}};
}

inline json to_json(const ApproxGap& g) {
  return {{"theta", point_json(g.theta)},
          {"c", g.c},
          {"gap", g.gap},
          {"normalized_gap", g.normalized_gap},
          {"objective_at_theta", g.objective_at_theta},
          {"sup_value", g.sup_value}};
}

inline json to_json(const LevelSetReport& r) {
  json set = json::array();
  for (const auto& I : r.intervals) set.push_back({num(I.lo), num(I.hi)});
  for (const auto& c : r.cells) set.push_back(box_json(c));
  json j = {{"alpha", r.alpha},
            {"set", set},
            {"whole_space", r.whole_space},
            {"empty", r.empty},
            {"bounded", r.bounded},
            {"bound_M", num(r.bound_M)},
            {"nonempty_interior", r.nonempty_interior}};
  if (r.unbounded_beyond) j["unbounded_beyond"] = *r.unbounded_beyond;
  return j;
}

inline json to_json(const ShapeVerdict& v) {
  json j = {{"holds", v.holds}, {"exact", v.exact}};
  if (v.witness) {
    const auto& w = *v.witness;
    j["witness"] = {{"x", point_json(w.x)},     {"y", point_json(w.y)},     {"lambda", w.lambda},
                    {"z", point_json(w.z)},     {"f_x", num(w.f_x)},        {"f_y", num(w.f_y)},
                    {"f_z", num(w.f_z)}};
  } else {
    j["witness"] = nullptr;
  }
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

inline json to_json(const ConditionReport& r) {
  json levels = json::array();
  for (const auto& L : r.level_sets) levels.push_back(to_json(L));
  return {{"level_set_condition", r.level_set_condition},
          {"witness_alpha", r.witness_alpha ? json(*r.witness_alpha) : json(nullptr)},
          {"eventually_level_bounded", r.eventually_level_bounded},
          {"quasiconcave", to_json(r.quasiconcave)},
          {"log_concave", to_json(r.log_concave)},
          {"alpha_grid", r.alpha_grid},
          {"level_sets", levels}};
}

inline json to_json(const LimitPoint& lp) {
  return {{"point", point_json(lp.point)}, {"members", lp.members}, {"dist_to_map", num(lp.dist_to_map)}};
}

inline json verdict_json(const SweepTrace& t) {
  json lps = json::array();
  for (const auto& lp : t.limit_points) lps.push_back(to_json(lp));
  json canon = json::array();
  for (const auto& r : t.rows) canon.push_back(point_json(r.argmax.canonical));
  return {{"verdict", to_string(t.verdict)},
          {"ladder", t.ladder},
          {"tail_start", t.tail_start},
          {"map", to_json(t.map)},
          {"canonicals", canon},
          {"limit_points", lps}};
}

inline std::string coord_field(const Point& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ";" : "") + fmt17(p[i]);
  return s;
}

/// One row per rung. 2D coordinates are joined with ';'.
inline std::string sweep_csv(const SweepTrace& t) {
  std::ostringstream os;
  os << "c,canonical,sup_value,dist_to_map,argmax_lo,argmax_hi\n";
  for (const auto& r : t.rows) {
    const Box h = r.argmax.hull();
    os << fmt17(r.c) << ',' << coord_field(r.argmax.canonical) << ',' << fmt17(r.argmax.sup_value) << ','
       << fmt17(r.dist_to_map) << ',' << coord_field(h.lower()) << ',' << coord_field(h.upper()) << '\n';
  }
  return os.str();
}

inline std::string domination_csv(const counterexample::NonconvergenceReport& rep) {
  std::ostringstream os;
  os << "nu,origin_value,plateau_bound,bayes_sup,canonical\n";
  for (const auto& r : rep.rows)
    os << r.nu << ',' << fmt17(r.origin_value) << ',' << fmt17(r.plateau_bound) << ',' << fmt17(r.bayes_sup)
       << ',' << coord_field(r.canonical) << '\n';
  return os.str();
}

inline json to_json(const HypoReport& rep) {
  json recs = json::array();
  for (const auto& r : rep.records) {
    json j = {{"set", r.open ? "open" : "closed"},
              {"lo", r.set.lo},
              {"hi", r.set.hi},
              {"nu", r.nu},
              {"sup_mollified", num(r.sup_mollified)},
              {"sup_base", num(r.sup_base)},
              {"margin", num(r.margin)},
              {"reference", num(r.reference)},
              {"slack", num(r.slack)},
              {"violation", r.violation},
              {"not_applicable", r.not_applicable}};
    if (!r.note.empty()) j["note"] = r.note;
    recs.push_back(std::move(j));
  }
  return {{"diagnostic", "finite hit-and-miss family"},
          {"nu", rep.nu_list},
          {"any_violation", rep.any_violation},
          {"records", recs}};
}

}  // namespace bayesmap::io

#endif  // BAYESMAP_IO_HPP
