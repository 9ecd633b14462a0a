#ifndef EQLAB_MEASURE_IO_HPP
#define EQLAB_MEASURE_IO_HPP

#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

#include "eqlab/convdim.hpp"
#include "eqlab/density_checks.hpp"
#include "eqlab/equidist.hpp"
#include "eqlab/errors.hpp"
#include "eqlab/exact_num.hpp"
#include "eqlab/measures.hpp"
#include "eqlab/orbits.hpp"
#include "eqlab/scenery.hpp"

namespace eqlab::io {

using json = nlohmann::ordered_json;

/// Canonical "num/den" form of an exact rational.
inline std::string to_fraction(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline std::string to_fraction(const exact_num::UnitRational& x) {
  return to_fraction(x.value());
}

/// Parse "num/den" (or a bare integer) into an exact rational.
inline mpq_class fraction_from(const std::string& text, const std::string& field) {
  std::string num = text, den = "1";
  if (auto slash = text.find('/'); slash != std::string::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
  }
  mpz_class n, d;
  if (mpz_set_str(n.get_mpz_t(), num.c_str(), 10) != 0 || num.empty())
    throw validation_error(field + ": '" + text + "' is not a rational (expected \"num/den\")");
  if (mpz_set_str(d.get_mpz_t(), den.c_str(), 10) != 0 || den.empty())
    throw validation_error(field + ": '" + text + "' is not a rational (expected \"num/den\")");
  if (d <= 0) throw validation_error(field + ": denominator must be positive in '" + text + "'");
  mpq_class q(n, d);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------------------
// Measure vocabulary
// ---------------------------------------------------------------------------

inline json measure_to_json(const measures::MeasureExpr& mu) {
  using Kind = measures::MeasureExpr::Kind;
  json j;
  switch (mu.kind) {
    case Kind::lebesgue:
      j["type"] = "lebesgue";
      break;
    case Kind::digit: {
      j["type"] = "digit";
      j["base"] = mu.base;
      json probs = json::array();
      for (const auto& p : mu.probs->entries) probs.push_back(to_fraction(p));
      j["probs"] = std::move(probs);
      break;
    }
    case Kind::atomic: {
      j["type"] = "atomic";
      json atoms = json::array();
      for (const auto& a : mu.atoms)
        atoms.push_back({{"location", to_fraction(a.location)}, {"weight", to_fraction(a.weight)}});
      j["atoms"] = std::move(atoms);
      break;
    }
    case Kind::affine_push:
      j["type"] = "affine";
      j["scale"] = to_fraction(mu.scale);
      j["offset"] = to_fraction(mu.offset);
      j["child"] = measure_to_json(*mu.left);
      break;
    case Kind::convolve:
      j["type"] = "convolve";
      j["left"] = measure_to_json(*mu.left);
      j["right"] = measure_to_json(*mu.right);
      break;
    case Kind::product:
      j["type"] = "product";
      j["left"] = measure_to_json(*mu.left);
      j["right"] = measure_to_json(*mu.right);
      break;
  }
  return j;
}

inline measures::MeasureExpr measure_from_json(const json& j) {
  if (!j.is_object()) throw validation_error("measure: expected a JSON object");
  if (!j.contains("type") || !j.at("type").is_string())
    throw validation_error("measure: needs a string \"type\" field");
  const std::string type = j.at("type").get<std::string>();

  auto require = [&](const char* field) -> const json& {
    if (!j.contains(field))
      throw validation_error(std::string(field) + ": required by measure type \"" + type + "\"");
    return j.at(field);
  };
  auto int_field = [&](const char* field) {
    const json& v = require(field);
    if (!v.is_number_integer())
      throw validation_error(std::string(field) + ": must be an integer");
    return v.get<int>();
  };

  if (type == "lebesgue") return measures::lebesgue();
  if (type == "digit") {
    int base = int_field("base");
    const json& probs = require("probs");
    if (!probs.is_array()) throw validation_error("probs: must be an array of \"num/den\" strings");
    std::vector<mpq_class> entries;
    for (const auto& p : probs) {
      if (!p.is_string()) throw validation_error("probs: entries must be \"num/den\" strings");
      entries.push_back(fraction_from(p.get<std::string>(), "probs"));
    }
    return measures::digit_measure(base, measures::ProbVector(std::move(entries)));
  }
  if (type == "atomic") {
    const json& atoms = require("atoms");
    if (!atoms.is_array()) throw validation_error("atoms: must be an array");
    std::vector<measures::Atom> list;
    for (const auto& a : atoms) {
      if (!a.is_object() || !a.contains("location") || !a.contains("weight"))
        throw validation_error("atoms: each atom needs \"location\" and \"weight\"");
      mpq_class loc = fraction_from(a.at("location").get<std::string>(), "atoms.location");
      if (loc < 0 || loc >= 1)
        throw validation_error("atoms.location: must lie in [0,1)");
      list.push_back({exact_num::UnitRational(loc.get_num(), loc.get_den()),
                      fraction_from(a.at("weight").get<std::string>(), "atoms.weight")});
    }
    return measures::atomic(std::move(list));
  }
  if (type == "affine") {
    mpq_class scale = fraction_from(require("scale").get<std::string>(), "scale");
    mpq_class offset = fraction_from(require("offset").get<std::string>(), "offset");
    return measures::affine_push(measure_from_json(require("child")), scale, offset);
  }
  if (type == "convolve")
    return measures::convolve(measure_from_json(require("left")),
                              measure_from_json(require("right")));
  if (type == "product")
    return measures::product(measure_from_json(require("left")),
                             measure_from_json(require("right")));
  if (type == "alpha") return measures::make_alpha(int_field("n"), int_field("k"));
  if (type == "beta") return measures::make_beta(int_field("base"));
  throw validation_error("measure: unknown type \"" + type + "\"");
}

// ---------------------------------------------------------------------------
// Accumulators and reports
// ---------------------------------------------------------------------------

inline json empirical_to_json(const orbits::EmpiricalMeasure2D& e, json params) {
  json j;
  j["count"] = e.count;
  j["grid"] = e.grid;
  json modes;
  for (long k = -e.F; k <= e.F; ++k)
    for (long m = -e.F; m <= e.F; ++m) {
      const auto& c = e.fourier[e.mode_index(k, m)];
      modes[std::to_string(k) + "," + std::to_string(m)] = {c.real(), c.imag()};
    }
  j["fourier"] = std::move(modes);
  j["params"] = std::move(params);
  return j;
}

inline json convergence_to_json(const equidist::ConvergenceReport& r) {
  json j;
  j["schedule"] = r.schedule;
  json points = json::array();
  for (const auto& p : r.points)
    points.push_back({{"point_id", p.point_id},
                      {"distances", p.distances},
                      {"final_max_mode_error", p.final_max_mode_error}});
  j["points"] = std::move(points);
  j["median_distance"] = r.median_distance;
  j["median_max_mode_error"] = r.median_max_mode_error;
  j["trend_ratio"] = r.trend_ratio;
  json table;
  for (const auto& [mode, err] : r.mode_error_table)
    table[std::to_string(mode.first) + "," + std::to_string(mode.second)] = err;
  j["mode_error_table"] = std::move(table);
  return j;
}

inline std::string convergence_csv(const equidist::ConvergenceReport& r) {
  std::ostringstream out;
  out << "point_id,N,distance\n";
  for (const auto& p : r.points)
    for (std::size_t i = 0; i < r.schedule.size(); ++i)
      out << p.point_id << "," << r.schedule[i] << "," << p.distances[i] << "\n";
  return out.str();
}

inline json scenery_sample_to_json(const scenery::ScenerySample& s) {
  json j;
  j["k"] = s.k;
  j["t"] = s.t;
  j["radius"] = to_fraction(s.radius);
  json d = json::array();
  for (const auto& q : s.descriptor.entries) d.push_back(to_fraction(q));
  j["descriptor"] = std::move(d);
  return j;
}

inline json scenery_to_json(const scenery::ScenerySeries& series) {
  json j;
  json samples = json::array();
  for (const auto& s : series.samples) samples.push_back(scenery_sample_to_json(s));
  j["samples"] = std::move(samples);
  j["skipped"] = series.skipped;
  return j;
}

inline std::string scenery_csv(const scenery::ScenerySeries& series) {
  std::ostringstream out;
  std::size_t width = series.samples.empty() ? 0 : series.samples.front().descriptor.size();
  out << "k,t";
  for (std::size_t i = 0; i < width; ++i) out << ",d" << i;
  out << "\n";
  for (const auto& s : series.samples) {
    out << s.k << "," << s.t;
    for (const auto& q : s.descriptor.entries) out << "," << exact_num::to_double(q);
    out << "\n";
  }
  return out.str();
}

inline json density_to_json(const density::DensityReport& r) {
  json j;
  j["K"] = r.K;
  j["m"] = r.m;
  j["n"] = r.n;
  j["description"] = r.description;
  j["seed"] = r.seed;
  j["hits"] = r.hits;
  json windows = json::array();
  for (const auto& w : r.windows) windows.push_back({{"start", w.start}, {"density", w.density}});
  j["windows"] = std::move(windows);
  return j;
}

inline std::string density_csv(const density::DensityReport& r) {
  std::ostringstream out;
  out << "k,hit\n";
  std::size_t next = 0;
  for (long k = 1; k <= r.K; ++k) {
    bool hit = next < r.hits.size() && r.hits[next] == k;
    if (hit) ++next;
    out << k << "," << (hit ? 1 : 0) << "\n";
  }
  return out.str();
}

inline std::string density_windows_csv(const density::DensityReport& r) {
  std::ostringstream out;
  out << "window_start,density\n";
  for (const auto& w : r.windows) out << w.start << "," << w.density << "\n";
  return out.str();
}

inline json lattice_to_json(const convdim::LatticeMeasure& l) {
  json j;
  j["base"] = l.base;
  j["level"] = l.level;
  json masses = json::array();
  for (const auto& q : l.masses) masses.push_back(to_fraction(q));
  j["masses"] = std::move(masses);
  return j;
}

inline std::string convdim_csv(const std::vector<std::pair<int, std::vector<double>>>& by_level) {
  std::ostringstream out;
  out << "q,k,coarse_dimension\n";
  for (const auto& [level, dims] : by_level)
    for (std::size_t q = 0; q < dims.size(); ++q)
      out << (q + 1) << "," << level << "," << dims[q] << "\n";
  return out.str();
}

}

#endif
