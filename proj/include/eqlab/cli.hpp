#ifndef EQLAB_CLI_HPP
#define EQLAB_CLI_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "eqlab/convdim.hpp"
#include "eqlab/density_checks.hpp"
#include "eqlab/equidist.hpp"
#include "eqlab/errors.hpp"
#include "eqlab/measure_io.hpp"
#include "eqlab/measures.hpp"
#include "eqlab/orbits.hpp"
#include "eqlab/rng.hpp"
#include "eqlab/scenery.hpp"
#include "eqlab/version.hpp"

namespace eqlab::cli {

using io::json;

/// Parsed and validated experiment description. `raw_text` preserves the
/// config file byte-for-byte for the run record's config echo.
struct ExperimentConfig {
  std::string kind;
  std::string raw_text;
  measures::MeasureExpr measure;
  int m = 0;
  int n = 0;
  int p = 0;
  orbits::AffineMap f, g;
  equidist::TargetCase target_case = equidist::TargetCase::part1;
  std::vector<std::int64_t> schedule;
  int ensemble = 1;
  std::uint64_t seed = 0;
  int F = 8;
  int G = 64;
  int r = 2;
  double tol = 1e-12;
  long modes = 8;
  long K = 200;
  long k_max = 0;
  scenery::ScaleStep step = scenery::ScaleStep::real(1.0);
  long W = 500;
  int q_max = 4;
  std::vector<int> levels{6, 8};
  std::string output;
};

namespace detail {

inline const json& require(const json& j, const char* field) {
  if (!j.contains(field))
    throw validation_error(std::string(field) + ": required field is missing");
  return j.at(field);
}

inline long integer_field(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_number_integer())
    throw validation_error(std::string(field) + ": must be an integer");
  return v.get<long>();
}

inline long integer_or(const json& j, const char* field, long fallback) {
  if (!j.contains(field)) return fallback;
  if (!j.at(field).is_number_integer())
    throw validation_error(std::string(field) + ": must be an integer");
  return j.at(field).get<long>();
}

inline double real_or(const json& j, const char* field, double fallback) {
  if (!j.contains(field)) return fallback;
  if (!j.at(field).is_number())
    throw validation_error(std::string(field) + ": must be a number");
  return j.at(field).get<double>();
}

inline orbits::AffineMap affine_or_identity(const json& j, const char* field) {
  if (!j.contains(field)) return orbits::AffineMap::identity();
  const json& a = j.at(field);
  if (!a.is_object())
    throw validation_error(std::string(field) + ": must be an object with scale and offset");
  mpq_class scale =
      io::fraction_from(require(a, "scale").get<std::string>(), std::string(field) + ".scale");
  mpq_class offset =
      io::fraction_from(require(a, "offset").get<std::string>(), std::string(field) + ".offset");
  return orbits::AffineMap(scale, offset);
}

// digit budget for sampled points: enough base-p digits to keep every scale
// level of the experiment inside the sampled expansion, plus guard digits
inline long scenery_digits(long k_max, double t_per_step, int sample_base, int r) {
  long double need = static_cast<long double>(k_max) * t_per_step /
                     std::log(static_cast<long double>(sample_base));
  return static_cast<long>(std::ceil(need)) + 64 + r + 2;
}

inline int sample_base_of(const measures::MeasureExpr& mu) {
  return mu.kind == measures::MeasureExpr::Kind::digit ? mu.base : 2;
}

}  // namespace detail

/// Parse and validate a config document. The original text is kept verbatim.
inline ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("config: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw validation_error("config: top level must be a JSON object");

  ExperimentConfig cfg;
  cfg.raw_text = text;
  cfg.kind = detail::require(j, "kind").is_string()
                 ? j.at("kind").get<std::string>()
                 : throw validation_error("kind: must be a string");
  static const std::vector<std::string> kinds{"equidist", "fourier", "dimension",
                                              "scenery", "density", "convdim"};
  if (std::find(kinds.begin(), kinds.end(), cfg.kind) == kinds.end())
    throw validation_error("kind: \"" + cfg.kind +
                           "\" is not one of equidist/fourier/dimension/scenery/density/convdim");

  if (!j.contains("seed")) throw validation_error("seed: required (runs never draw wall-clock entropy)");
  if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
    throw validation_error("seed: must be a non-negative integer");
  long long seed_value = j.at("seed").get<long long>();
  if (seed_value < 0) throw validation_error("seed: must be a non-negative integer");
  cfg.seed = static_cast<std::uint64_t>(seed_value);
  cfg.measure = io::measure_from_json(detail::require(j, "measure"));

  cfg.F = static_cast<int>(detail::integer_or(j, "F", 8));
  cfg.G = static_cast<int>(detail::integer_or(j, "G", 64));
  cfg.r = static_cast<int>(detail::integer_or(j, "r", 2));
  cfg.tol = detail::real_or(j, "tol", 1e-12);
  if (cfg.tol <= 0) throw validation_error("tol: must be positive");
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw validation_error("output: must be a path string");
    cfg.output = j.at("output").get<std::string>();
  }

  if (cfg.kind == "equidist") {
    cfg.m = static_cast<int>(detail::integer_field(j, "m"));
    cfg.n = static_cast<int>(detail::integer_field(j, "n"));
    cfg.p = static_cast<int>(detail::integer_or(j, "p", 0));
    if (cfg.m <= cfg.n || cfg.n <= 1)
      throw validation_error("m,n: the equidistribution experiment needs m > n > 1");
    const json& c = detail::require(j, "case");
    if (!c.is_string() || (c.get<std::string>() != "part1" && c.get<std::string>() != "part2"))
      throw validation_error("case: must be \"part1\" or \"part2\"");
    cfg.target_case = c.get<std::string>() == "part1" ? equidist::TargetCase::part1
                                                       : equidist::TargetCase::part2;
    const json& sched = detail::require(j, "schedule");
    if (!sched.is_array() || sched.empty())
      throw validation_error("schedule: must be a non-empty integer array");
    for (const auto& s : sched) {
      if (!s.is_number_integer()) throw validation_error("schedule: entries must be integers");
      cfg.schedule.push_back(s.get<std::int64_t>());
    }
    for (std::size_t i = 0; i + 1 < cfg.schedule.size(); ++i)
      if (cfg.schedule[i] >= cfg.schedule[i + 1])
        throw validation_error("schedule: step counts must be strictly increasing");
    cfg.ensemble = static_cast<int>(detail::integer_or(j, "ensemble", 1));
    if (cfg.ensemble < 1) throw validation_error("ensemble: must be at least 1");
    cfg.f = detail::affine_or_identity(j, "f");
    cfg.g = detail::affine_or_identity(j, "g");
  } else if (cfg.kind == "fourier") {
    cfg.modes = detail::integer_or(j, "modes", 8);
    if (cfg.modes < 0) throw validation_error("modes: must be non-negative");
  } else if (cfg.kind == "dimension") {
    if (cfg.measure.kind != measures::MeasureExpr::Kind::digit)
      throw validation_error("measure: the dimension experiment needs a digit measure");
  } else if (cfg.kind == "scenery") {
    cfg.k_max = detail::integer_field(j, "k_max");
    if (cfg.k_max < 1) throw validation_error("k_max: must be at least 1");
    const json& step = detail::require(j, "step");
    if (step.is_object() && step.contains("log_of"))
      cfg.step = scenery::ScaleStep::log_of(static_cast<int>(detail::integer_field(step, "log_of")));
    else if (step.is_object() && step.contains("t0"))
      cfg.step = scenery::ScaleStep::real(detail::real_or(step, "t0", 0.0));
    else
      throw validation_error("step: must be {\"log_of\": base} or {\"t0\": positive real}");
    cfg.W = detail::integer_or(j, "W", 500);
    if (cfg.W < 1) throw validation_error("W: must be positive");
    cfg.ensemble = static_cast<int>(detail::integer_or(j, "ensemble", 1));
    if (cfg.ensemble < 1) throw validation_error("ensemble: must be at least 1");
  } else if (cfg.kind == "density") {
    cfg.m = static_cast<int>(detail::integer_field(j, "m"));
    cfg.n = static_cast<int>(detail::integer_field(j, "n"));
    if (cfg.m <= cfg.n || cfg.n <= 1)
      throw validation_error("m,n: the density experiment needs m > n > 1");
    cfg.K = detail::integer_or(j, "K", 200);
    if (cfg.K < 0) throw validation_error("K: must be non-negative");
    cfg.ensemble = static_cast<int>(detail::integer_or(j, "ensemble", 1));
    if (cfg.ensemble < 1) throw validation_error("ensemble: must be at least 1");
  } else if (cfg.kind == "convdim") {
    if (cfg.measure.kind != measures::MeasureExpr::Kind::digit)
      throw validation_error("measure: the convolution experiment needs a digit measure");
    cfg.q_max = static_cast<int>(detail::integer_or(j, "q_max", 4));
    if (cfg.q_max < 1) throw validation_error("q_max: must be at least 1");
    if (j.contains("levels")) {
      const json& lv = j.at("levels");
      if (!lv.is_array() || lv.empty())
        throw validation_error("levels: must be a non-empty integer array");
      cfg.levels.clear();
      for (const auto& e : lv) {
        if (!e.is_number_integer()) throw validation_error("levels: entries must be integers");
        cfg.levels.push_back(e.get<int>());
      }
    }
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Experiment pipelines
// ---------------------------------------------------------------------------

namespace detail {

inline json run_equidist(const ExperimentConfig& cfg) {
  int sample_base = sample_base_of(cfg.measure);
  long digits =
      exact_num::required_digits(cfg.schedule.back(), std::max(cfg.m, cfg.n), sample_base);
  std::vector<exact_num::UnitRational> ensemble;
  ensemble.reserve(static_cast<std::size_t>(cfg.ensemble));
  for (int i = 0; i < cfg.ensemble; ++i)
    ensemble.push_back(measures::sample(cfg.measure, rng::derive_seed(cfg.seed, i), digits));
  std::optional<measures::MeasureExpr> mu;
  if (cfg.target_case == equidist::TargetCase::part1) mu = cfg.measure;
  auto report = equidist::convergence_report(ensemble, cfg.f, cfg.g, cfg.m, cfg.n, mu,
                                             cfg.target_case, cfg.schedule, cfg.F, cfg.G,
                                             cfg.tol);
  json payload;
  payload["report"] = io::convergence_to_json(report);
  payload["target"] = io::measure_to_json(equidist::target_for(cfg.target_case, mu));
  payload["params"] = {{"m", cfg.m},
                       {"n", cfg.n},
                       {"p", cfg.p},
                       {"case", cfg.target_case == equidist::TargetCase::part1 ? "part1" : "part2"},
                       {"ensemble", cfg.ensemble},
                       {"seed", cfg.seed},
                       {"digits", digits},
                       {"F", cfg.F},
                       {"G", cfg.G},
                       {"tol", cfg.tol}};
  return payload;
}

inline json run_fourier(const ExperimentConfig& cfg) {
  json table;
  for (long k = -cfg.modes; k <= cfg.modes; ++k) {
    auto c = measures::fourier_1d(cfg.measure, k, cfg.tol);
    table[std::to_string(k)] = {c.real(), c.imag()};
  }
  json payload;
  payload["table"] = std::move(table);
  payload["params"] = {{"modes", cfg.modes}, {"tol", cfg.tol}};
  return payload;
}

inline json run_dimension(const ExperimentConfig& cfg) {
  const auto& probs = *cfg.measure.probs;
  json payload;
  payload["entropy_nats"] = measures::entropy(probs);
  payload["dimension"] = measures::digit_dimension(cfg.measure.base, probs);
  payload["base"] = cfg.measure.base;
  return payload;
}

inline json run_scenery(const ExperimentConfig& cfg) {
  int sample_base = sample_base_of(cfg.measure);
  long digits = scenery_digits(cfg.k_max, cfg.step.t0, sample_base, cfg.r);
  json centers = json::array();
  json first_series;
  for (int i = 0; i < cfg.ensemble; ++i) {
    auto x = measures::sample(cfg.measure, rng::derive_seed(cfg.seed, i), digits);
    auto series = scenery::scenery_series(cfg.measure, x, cfg.step, cfg.k_max, cfg.r);
    json entry;
    entry["center"] = io::to_fraction(x);
    entry["kept"] = series.samples.size();
    entry["skipped"] = series.skipped.size();
    bool enough = static_cast<long>(series.samples.size()) >= 2 * cfg.W;
    entry["gap"] = enough ? json(scenery::stationarity_gap(series, cfg.W)) : json(nullptr);
    entry["mean_drift"] =
        enough ? json(scenery::mean_descriptor_drift(series, cfg.W)) : json(nullptr);
    centers.push_back(std::move(entry));
    if (i == 0) first_series = io::scenery_to_json(series);
  }
  json payload;
  payload["centers"] = std::move(centers);
  payload["first_center_series"] = std::move(first_series);
  payload["params"] = {{"k_max", cfg.k_max},
                       {"r", cfg.r},
                       {"W", cfg.W},
                       {"ensemble", cfg.ensemble},
                       {"seed", cfg.seed},
                       {"digits", digits},
                       {"step", cfg.step.exact ? json{{"log_of", cfg.step.base}}
                                               : json{{"t0", cfg.step.t0}}}};
  return payload;
}

inline json run_density(const ExperimentConfig& cfg) {
  json reports = json::array();
  int final_below_first = 0;
  for (int i = 0; i < cfg.ensemble; ++i) {
    auto report =
        density::a_k_density(cfg.measure, cfg.m, cfg.n, cfg.K, rng::derive_seed(cfg.seed, i));
    if (!report.windows.empty() &&
        report.windows.back().density < report.windows.front().density)
      ++final_below_first;
    reports.push_back(io::density_to_json(report));
  }
  json payload;
  payload["reports"] = std::move(reports);
  payload["final_below_first"] = final_below_first;
  payload["params"] = {{"m", cfg.m},
                       {"n", cfg.n},
                       {"K", cfg.K},
                       {"ensemble", cfg.ensemble},
                       {"seed", cfg.seed}};
  return payload;
}

inline json run_convdim(const ExperimentConfig& cfg) {
  json levels = json::array();
  for (int level : cfg.levels) {
    auto dims = convdim::convolution_growth(cfg.measure, cfg.q_max, level);
    levels.push_back({{"k", level}, {"dims", dims}});
  }
  json payload;
  payload["levels"] = std::move(levels);
  payload["params"] = {{"q_max", cfg.q_max}, {"levels", cfg.levels}};
  return payload;
}

}  // namespace detail

/// Execute the experiment a config describes and return its payload.
inline json run_experiment(const ExperimentConfig& cfg) {
  if (cfg.kind == "equidist") return detail::run_equidist(cfg);
  if (cfg.kind == "fourier") return detail::run_fourier(cfg);
  if (cfg.kind == "dimension") return detail::run_dimension(cfg);
  if (cfg.kind == "scenery") return detail::run_scenery(cfg);
  if (cfg.kind == "density") return detail::run_density(cfg);
  return detail::run_convdim(cfg);
}

/// Envelope written to the output path: config echo, version, payload, and
/// wall time. Wall time lives only here, never inside the payload, so payload
/// bytes are reproducible.
inline json make_run_record(const ExperimentConfig& cfg, json payload, double wall_ms) {
  json record;
  record["version"] = eqlab::version;
  record["kind"] = cfg.kind;
  record["config"] = cfg.raw_text;
  record["payload"] = std::move(payload);
  record["wall_ms"] = wall_ms;
  return record;
}

/// Companion CSV for kinds that have a canonical flat table; empty when the
/// kind has none.
inline std::string experiment_csv(const ExperimentConfig& cfg, const json& payload) {
  std::ostringstream out;
  if (cfg.kind == "fourier") {
    out << "k,re,im\n";
    for (long k = -cfg.modes; k <= cfg.modes; ++k) {
      const auto& c = payload.at("table").at(std::to_string(k));
      out << k << "," << c.at(0).get<double>() << "," << c.at(1).get<double>() << "\n";
    }
    return out.str();
  }
  if (cfg.kind == "equidist") {
    out << "point_id,N,distance\n";
    for (const auto& p : payload.at("report").at("points")) {
      const auto& schedule = payload.at("report").at("schedule");
      for (std::size_t i = 0; i < schedule.size(); ++i)
        out << p.at("point_id").get<int>() << "," << schedule.at(i).get<std::int64_t>() << ","
            << p.at("distances").at(i).get<double>() << "\n";
    }
    return out.str();
  }
  if (cfg.kind == "scenery") {
    const auto& samples = payload.at("first_center_series").at("samples");
    std::size_t width =
        samples.empty() ? 0 : samples.at(0).at("descriptor").size();
    out << "k,t";
    for (std::size_t i = 0; i < width; ++i) out << ",d" << i;
    out << "\n";
    for (const auto& s : samples) {
      out << s.at("k").get<long>() << "," << s.at("t").get<double>();
      for (const auto& d : s.at("descriptor"))
        out << "," << exact_num::to_double(io::fraction_from(d.get<std::string>(), "descriptor"));
      out << "\n";
    }
    return out.str();
  }
  if (cfg.kind == "convdim") {
    out << "q,k,coarse_dimension\n";
    for (const auto& lv : payload.at("levels")) {
      const auto& dims = lv.at("dims");
      for (std::size_t q = 0; q < dims.size(); ++q)
        out << (q + 1) << "," << lv.at("k").get<int>() << "," << dims.at(q).get<double>() << "\n";
    }
    return out.str();
  }
  if (cfg.kind == "density") {
    out << "seed_index,window_start,density\n";
    int idx = 0;
    for (const auto& rep : payload.at("reports")) {
      for (const auto& w : rep.at("windows"))
        out << idx << "," << w.at("start").get<long>() << "," << w.at("density").get<double>()
            << "\n";
      ++idx;
    }
    return out.str();
  }
  return {};
}

/// Field-by-field description of the config format, printed by print-schema.
inline std::string schema_text() {
  return R"(Experiment config (JSON object)

Common fields
  kind     one of: equidist | fourier | dimension | scenery | density | convdim
  measure  measure expression (vocabulary below)
  seed     non-negative integer; required. Per-member seeds are derived as
           splitmix64(seed XOR splitmix64(index+1)); no wall-clock entropy exists.
  tol      positive real, default 1e-12 (Fourier truncation budget)
  F        mode cutoff, default 8        G  grid size, default 64
  r        descriptor depth, default 2   output  optional path for the run record

Per kind
  equidist: m, n (integers, m > n > 1), optional p (recorded only),
            case = "part1" | "part2", schedule = strictly increasing step counts,
            ensemble (default 1), optional f, g = {"scale":"a/b","offset":"c/d"}
            with image of [0,1] inside [0,1].
  fourier:  modes (default 8); emits coefficients for |k| <= modes.
  dimension: measure must be of type digit.
  scenery:  k_max >= 1, step = {"log_of": m} (exact radii m^-k) or
            {"t0": real > 0} (certified rational radii), W (default 500),
            ensemble (default 1).
  density:  m, n (m > n > 1), K (default 200), ensemble (default 1).
  convdim:  q_max (default 4), levels (integer array, default [6,8]);
            measure must be of type digit.

Measure vocabulary (rationals are "num/den" strings)
  {"type":"lebesgue"}
  {"type":"digit","base":2,"probs":["1/3","2/3"]}
  {"type":"atomic","atoms":[{"location":"1/63","weight":"1/2"}, ...]}
  {"type":"affine","scale":"1/2","offset":"1/4","child": ...}
  {"type":"convolve","left": ..., "right": ...}
  {"type":"product","left": ..., "right": ...}
  {"type":"alpha","n":2,"k":3}      two-atom period-2 orbit measure
  {"type":"beta","base":2}          digit measure with probs (1/3, 2/3)

Output
  run writes a JSON run record {version, kind, config, payload, wall_ms} to the
  output path (config "output" or --output) and prints a summary; kinds with a
  flat table also get a sibling .csv. Exit codes: 0 success, 2 config/validation
  error, 3 runtime error.
)";
}

/// Load a config file, run it, write outputs. Returns the process exit code.
inline int handle_run(const std::string& config_path, const std::string& output_override,
                      std::ostream& out, std::ostream& err) {
  std::string text;
  {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      err << "config: cannot read '" << config_path << "'\n";
      return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    ExperimentConfig cfg = parse_config(text);
    if (!output_override.empty()) cfg.output = output_override;
    auto start = std::chrono::steady_clock::now();
    json payload = run_experiment(cfg);
    double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    json record = make_run_record(cfg, std::move(payload), wall_ms);
    if (!cfg.output.empty()) {
      std::ofstream f(cfg.output, std::ios::binary);
      if (!f) {
        err << "output: cannot write '" << cfg.output << "'\n";
        return 3;
      }
      f << record.dump(2) << "\n";
      std::string csv = experiment_csv(cfg, record.at("payload"));
      if (!csv.empty()) {
        std::string csv_path = cfg.output;
        if (auto dot = csv_path.rfind('.'); dot != std::string::npos)
          csv_path.resize(dot);
        csv_path += ".csv";
        std::ofstream c(csv_path, std::ios::binary);
        c << csv;
      }
      out << cfg.kind << ": wrote " << cfg.output << " (" << wall_ms << " ms)\n";
    } else {
      out << record.dump(2) << "\n";
    }
    return 0;
  } catch (const validation_error& e) {
    err << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << "\n";
    return 3;
  }
}

}

#endif
