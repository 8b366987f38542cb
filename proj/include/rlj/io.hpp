#pragma once

// JSON forms of the data types. Every to_json output is accepted by the
// matching *_from_json (which validates).

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rlj/approx.hpp"
#include "rlj/error.hpp"
#include "rlj/jacobi.hpp"
#include "rlj/krein.hpp"
#include "rlj/measures.hpp"
#include "rlj/sets.hpp"
#include "rlj/spectral.hpp"
#include "rlj/toda.hpp"

namespace rlj::io {

using nlohmann::json;

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

inline void write_json_file(const std::string& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

namespace detail {

template <class T>
T get(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string(what) + ": missing field \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string(what) + ": field \"" + key + "\" has the wrong type");
  }
}

}  // namespace detail

// ---- sets

inline json to_json(const FiniteGapSet& k) {
  json bands = json::array();
  for (const auto& b : k.bands()) bands.push_back({b.lo, b.hi});
  return {{"radius", k.radius()}, {"bands", bands}};
}

inline FiniteGapSet set_from_json(const json& j) {
  const auto r = detail::get<double>(j, "radius", "set");
  const auto raw = detail::get<std::vector<std::vector<double>>>(j, "bands", "set");
  std::vector<Interval> bands;
  for (const auto& b : raw) {
    require(b.size() == 2, "set: every band must be [lo, hi]");
    bands.push_back({b[0], b[1]});
  }
  return {std::move(bands), r};
}

// ---- Krein functions

inline json to_json(const KreinFunction& xi) {
  return {{"radius", xi.radius()}, {"breakpoints", xi.breakpoints()}, {"values", xi.values()}};
}

inline KreinFunction xi_from_json(const json& j) {
  return {detail::get<double>(j, "radius", "xi"), detail::get<std::vector<double>>(j, "breakpoints", "xi"),
          detail::get<std::vector<double>>(j, "values", "xi")};
}

// ---- measures

inline json to_json(const SpectralMeasure& m) {
  json atoms = json::array();
  for (const auto& a : m.atoms()) atoms.push_back({a.position, a.weight});
  json bands = json::array();
  for (const auto& b : m.ac_bands())
    bands.push_back({{"lo", b.band.lo}, {"hi", b.band.hi}, {"nodes", b.nodes}, {"density", b.density}});
  return {{"atoms", atoms}, {"bands", bands}};
}

inline SpectralMeasure measure_from_json(const json& j) {
  std::vector<Atom> atoms;
  for (const auto& a : detail::get<std::vector<std::vector<double>>>(j, "atoms", "measure")) {
    require(a.size() == 2, "measure: every atom must be [position, weight]");
    atoms.push_back({a[0], a[1]});
  }
  std::vector<AcBand> bands;
  if (j.contains("bands")) {
    for (const auto& b : j.at("bands")) {
      bands.push_back(AcBand::from_samples({detail::get<double>(b, "lo", "measure band"),
                                            detail::get<double>(b, "hi", "measure band")},
                                           detail::get<std::vector<double>>(b, "nodes", "measure band"),
                                           detail::get<std::vector<double>>(b, "density", "measure band")));
    }
  }
  return {std::move(atoms), std::move(bands)};
}

// ---- Jacobi matrices

inline json to_json(const JacobiMatrix& jm) {
  json boundary = "pad";
  if (jm.is_periodic()) boundary = {{"periodic", jm.period()}};
  return {{"a", jm.a_window()}, {"b", jm.b_window()}, {"offset", jm.first()}, {"boundary", boundary}};
}

inline JacobiMatrix jacobi_from_json(const json& j) {
  auto a = detail::get<std::vector<double>>(j, "a", "jacobi");
  auto b = detail::get<std::vector<double>>(j, "b", "jacobi");
  const long offset = j.contains("offset") ? detail::get<long>(j, "offset", "jacobi") : 0L;
  BoundaryPolicy policy = PadConstant{};
  if (j.contains("boundary")) {
    const auto& bd = j.at("boundary");
    if (bd.is_string()) {
      require(bd.get<std::string>() == "pad", "jacobi: boundary must be \"pad\" or {\"periodic\": p}");
    } else {
      policy = Periodic{detail::get<int>(bd, "periodic", "jacobi boundary")};
    }
  }
  return {std::move(a), std::move(b), offset, policy};
}

inline PeriodicJacobi periodic_from_json(const json& j) {
  const JacobiMatrix jm = jacobi_from_json(j);
  require(jm.is_periodic(), "a periodic Jacobi matrix needs boundary {\"periodic\": p}");
  PeriodicJacobi pj;
  for (long n = 0; n < jm.period(); ++n) {
    pj.a.push_back(jm.a(n));
    pj.b.push_back(jm.b(n));
  }
  pj.validate(false);
  return pj;
}

inline json to_json(const PeriodicJacobi& pj) { return to_json(pj.to_jacobi()); }

// ---- torus points and split specs

inline json to_json(const TorusPoint& p) { return {{"mu", p.mu}, {"sigma", p.sigma}}; }

inline TorusPoint torus_from_json(const json& j) {
  return {detail::get<std::vector<double>>(j, "mu", "torus"), detail::get<std::vector<int>>(j, "sigma", "torus")};
}

inline json to_json(const SplitSpec& s) {
  json out = {{"sigma", s.sigma}};
  if (s.g) out["g"] = *s.g;
  return out;
}

inline SplitSpec split_from_json(const json& j) {
  SplitSpec s;
  if (j.contains("sigma")) s.sigma = detail::get<std::vector<int>>(j, "sigma", "split");
  if (j.contains("g")) s.g = detail::get<std::vector<double>>(j, "g", "split");
  return s;
}

inline std::vector<SubdivisionPlan> schedule_from_json(const json& j) {
  require(j.is_array(), "schedule must be an array of {\"n\": .., \"delta\": ..}");
  std::vector<SubdivisionPlan> out;
  for (const auto& e : j) out.push_back({detail::get<int>(e, "n", "schedule"), detail::get<double>(e, "delta", "schedule")});
  return out;
}

inline json to_json(const ReflectionlessReport& r) {
  return {{"pass", r.pass},       {"max_abs_re", r.max_abs_re}, {"max_abs_re_raw", r.max_abs_re_raw},
          {"worst_t", r.worst_t}, {"worst_n", r.worst_n},       {"samples", r.samples},
          {"vacuous_bands", r.vacuous_bands}};
}

inline json to_json(const SpectrumInclusionReport& r) {
  return {{"pass", r.pass}, {"poles_found", r.poles_found}, {"worst_location", r.worst_location}};
}

}  // namespace rlj::io
