#pragma once
/**
 * @file config.hpp
 * @brief Scene/run configuration documents (JSON) and their validation.
 *
 * See docs/config.md for the schema. Unknown keys are rejected so typos
 * surface as ConfigError with the offending path instead of being ignored.
 */

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "rfsim/emitter.hpp"
#include "rfsim/error.hpp"
#include "rfsim/geometry.hpp"
#include "rfsim/receiver.hpp"
#include "rfsim/wavefield.hpp"

namespace rfsim::cli {

using nlohmann::json;

struct SegmentConfig {
  Segment segment;
  double max_width = 0.01;

  bool operator==(const SegmentConfig&) const = default;
};

struct LinearLayout {
  Vec2 start;
  Vec2 spacing;
  std::size_t count = 0;

  bool operator==(const LinearLayout&) const = default;
};

struct ArrayConfig {
  std::variant<LinearLayout, std::vector<Vec2>> layout = LinearLayout{};
  double exposure_s = 1e-6;

  bool operator==(const ArrayConfig&) const = default;

  AntennaArray build() const {
    if (const auto* lin = std::get_if<LinearLayout>(&layout))
      return AntennaArray::linear(lin->start, lin->spacing, lin->count, exposure_s);
    AntennaArray a{std::get<std::vector<Vec2>>(layout), exposure_s};
    validate(a);
    return a;
  }
};

struct RunConfig {
  std::size_t max_bounces = 0;
  double tol = 0.0;
  CaptureMode mode = CaptureMode::Radar;
  std::uint64_t rng_seed = 0;
  bool include_direct = true;
  bool allow_wide_patches = false;
  unsigned threads = 1;

  bool operator==(const RunConfig&) const = default;

  RenderOptions render_options() const { return {max_bounces, tol, include_direct, threads}; }
};

struct AnalysisConfig {
  double first_deg = -90.0;
  double last_deg = 90.0;
  double step_deg = 0.5;
  std::size_t antenna = 0;
  std::size_t oversample = 1;

  bool operator==(const AnalysisConfig&) const = default;
};

struct SweepConfig {
  std::vector<double> aperture_freqs_hz;
  double target_resolution_deg = 10.0;
  double fixed_aperture_m = 0.1;
  std::vector<double> bandwidths_hz;
  std::vector<double> object_sizes_m;
  std::vector<double> object_angles_deg;
  double object_freq_hz = 2.4e9;
  double object_standoff_m = 4.0;
  std::vector<double> widths_over_lambda;
  std::vector<double> thetas_deg;
  double patch_freq_hz = 2.4e9;
  std::size_t quadrature_points = 64;

  bool operator==(const SweepConfig&) const = default;
};

struct SceneConfig {
  Emitter emitter;
  std::vector<SegmentConfig> segments;
  std::optional<ArrayConfig> array;
  std::optional<GridSpec> grid;
  RunConfig run;
  AnalysisConfig analysis;
  SweepConfig sweep;

  bool operator==(const SceneConfig&) const = default;

  Scene build_scene() const {
    std::vector<Segment> segs;
    std::vector<double> widths;
    for (const auto& s : segments) {
      segs.push_back(s.segment);
      widths.push_back(s.max_width);
    }
    return Scene(std::move(segs), widths);
  }
};

/// Default sweep grids used when a config omits them.
inline SweepConfig default_sweep() {
  SweepConfig s;
  for (double f = 1e6; f <= 300e9 * 1.0000001; f *= std::pow(10.0, 0.25)) s.aperture_freqs_hz.push_back(f);
  for (double b = 1e6; b <= 10e9 * 1.0000001; b *= std::pow(10.0, 0.25)) s.bandwidths_hz.push_back(b);
  s.object_sizes_m = {0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  s.object_angles_deg = {0.0, 10.0, 20.0, 30.0, 40.0};
  s.widths_over_lambda = {0.05, 0.1, 0.25, 0.5, 1.0, 2.0};
  for (int t = 0; t <= 90; t += 1) s.thetas_deg.push_back(static_cast<double>(t));
  return s;
}

namespace detail {

class Reader {
public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const std::string& path() const { return path_; }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json& raw(const std::string& key) const {
    seen_.insert(key);
    if (!node_.contains(key)) throw ConfigError(sub(key), "required field is missing");
    return node_.at(key);
  }

  double number(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(sub(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(sub(key), "must be finite");
    return d;
  }
  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::uint64_t unsigned_int(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      throw ConfigError(sub(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }
  std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? unsigned_int(key) : fallback;
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(sub(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(sub(key), "expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
  }

  Vec2 point(const std::string& key) const { return parse_point(raw(key), sub(key)); }

  Phasor complex(const std::string& key, Phasor fallback) const {
    if (!has(key)) return fallback;
    Reader r(raw(key), sub(key));
    const Phasor p{r.number("re", 0.0), r.number("im", 0.0)};
    r.finish();
    return p;
  }

  std::vector<double> numbers(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(sub(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(sub(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  /// Rejects keys that were never read.
  void finish() const {
    for (const auto& [key, value] : node_.items())
      if (!seen_.count(key)) throw ConfigError(sub(key), "unknown field");
  }

  static Vec2 parse_point(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw ConfigError(path, "expected [x, y]");
    const Vec2 p{v[0].get<double>(), v[1].get<double>()};
    if (!p.finite()) throw ConfigError(path, "must be finite");
    return p;
  }

private:
  const json& node_;
  std::string path_;
  mutable std::set<std::string> seen_;
};

inline json to_json(Vec2 p) { return json::array({p.x, p.y}); }
inline json to_json(Phasor p) { return json{{"re", p.real()}, {"im", p.imag()}}; }

inline Emitter parse_emitter(const Reader& r) {
  Emitter e;
  e.position = r.point("position");
  e.carrier_hz = r.number("carrier_hz");
  e.amplitude = r.complex("amplitude", {1.0, 0.0});
  if (r.has("modulation")) {
    Reader m(r.raw("modulation"), r.sub("modulation"));
    const std::string kind = m.string("kind");
    if (kind == "cw") {
      e.modulation = ContinuousWave{};
    } else if (kind == "tones") {
      DiscreteTones tones;
      if (m.has("tones")) {
        const json& list = m.raw("tones");
        if (!list.is_array()) throw ConfigError(m.sub("tones"), "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
          Reader t(list[i], m.sub("tones") + "[" + std::to_string(i) + "]");
          tones.tones.push_back({t.number("offset_hz"), t.complex("amplitude", {1.0, 0.0})});
          t.finish();
        }
      }
      if (m.has("comb")) {
        // Shorthand: `count` unit tones at offsets 0, spacing, 2 * spacing, ...
        Reader c(m.raw("comb"), m.sub("comb"));
        const auto count = c.unsigned_int("count");
        const double spacing = c.number("spacing_hz");
        const double first = c.number("first_offset_hz", 0.0);
        c.finish();
        if (count == 0 || count > 1'000'000) throw ConfigError(m.sub("comb.count"), "must be in [1, 1e6]");
        for (std::uint64_t i = 0; i < count; ++i)
          tones.tones.push_back({first + spacing * static_cast<double>(i), {1.0, 0.0}});
      }
      if (tones.tones.empty()) throw ConfigError(m.sub("tones"), "at least one tone is required");
      e.modulation = std::move(tones);
    } else if (kind == "pulse") {
      Pulse pulse;
      pulse.sample_rate_hz = m.number("sample_rate_hz");
      const json& samples = m.raw("samples");
      if (!samples.is_array()) throw ConfigError(m.sub("samples"), "expected an array of [re, im]");
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const Vec2 s = Reader::parse_point(samples[i], m.sub("samples") + "[" + std::to_string(i) + "]");
        pulse.samples.emplace_back(s.x, s.y);
      }
      e.modulation = std::move(pulse);
    } else {
      throw ConfigError(m.sub("kind"), "unknown modulation '" + kind + "' (expected cw, tones or pulse)");
    }
    m.finish();
  }
  r.finish();
  return e;
}

inline json emitter_to_json(const Emitter& e) {
  json j{{"position", to_json(e.position)}, {"carrier_hz", e.carrier_hz}, {"amplitude", to_json(e.amplitude)}};
  if (std::holds_alternative<ContinuousWave>(e.modulation)) {
    j["modulation"] = {{"kind", "cw"}};
  } else if (const auto* tones = std::get_if<DiscreteTones>(&e.modulation)) {
    json list = json::array();
    for (const auto& t : tones->tones) list.push_back({{"offset_hz", t.offset_hz}, {"amplitude", to_json(t.amplitude)}});
    j["modulation"] = {{"kind", "tones"}, {"tones", list}};
  } else {
    const auto& p = std::get<Pulse>(e.modulation);
    json samples = json::array();
    for (const auto& s : p.samples) samples.push_back({s.real(), s.imag()});
    j["modulation"] = {{"kind", "pulse"}, {"sample_rate_hz", p.sample_rate_hz}, {"samples", samples}};
  }
  return j;
}

inline SegmentConfig parse_segment(const Reader& r) {
  SegmentConfig s;
  s.segment.a = r.point("a");
  s.segment.b = r.point("b");
  s.segment.alpha = r.complex("alpha", {1.0, 0.0});
  const std::string normal = r.string("normal");
  if (normal == "left") {
    s.segment.side = NormalSide::Left;
  } else if (normal == "right") {
    s.segment.side = NormalSide::Right;
  } else {
    throw ConfigError(r.sub("normal"), "expected \"left\" or \"right\"");
  }
  const std::string kind = r.string("interaction", "reflective");
  if (kind == "reflective") {
    s.segment.interaction = Interaction::Reflective;
  } else if (kind == "aperture") {
    s.segment.interaction = Interaction::Aperture;
  } else {
    throw ConfigError(r.sub("interaction"), "expected \"reflective\" or \"aperture\"");
  }
  s.max_width = r.number("max_width");
  r.finish();
  return s;
}

}  // namespace detail

/// Parses a config document; throws ConfigError with the field path on any schema problem.
inline SceneConfig parse_config(const json& doc) {
  using detail::Reader;
  Reader root(doc, "");
  SceneConfig cfg;
  cfg.sweep = default_sweep();

  cfg.emitter = detail::parse_emitter(Reader(root.raw("emitter"), "emitter"));

  if (root.has("segments")) {
    const json& list = root.raw("segments");
    if (!list.is_array()) throw ConfigError("segments", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i)
      cfg.segments.push_back(detail::parse_segment(Reader(list[i], "segments[" + std::to_string(i) + "]")));
  }

  if (root.has("array")) {
    Reader a(root.raw("array"), "array");
    ArrayConfig arr;
    arr.exposure_s = a.number("exposure_s", 1e-6);
    if (a.has("linear") == a.has("positions"))
      throw ConfigError("array", "exactly one of \"linear\" or \"positions\" is required");
    if (a.has("linear")) {
      Reader l(a.raw("linear"), a.sub("linear"));
      arr.layout = LinearLayout{l.point("start"), l.point("spacing"), l.unsigned_int("count")};
      l.finish();
    } else {
      const json& list = a.raw("positions");
      if (!list.is_array()) throw ConfigError(a.sub("positions"), "expected an array of [x, y]");
      std::vector<Vec2> pos;
      for (std::size_t i = 0; i < list.size(); ++i)
        pos.push_back(Reader::parse_point(list[i], a.sub("positions") + "[" + std::to_string(i) + "]"));
      arr.layout = std::move(pos);
    }
    a.finish();
    cfg.array = arr;
  }

  if (root.has("grid")) {
    Reader g(root.raw("grid"), "grid");
    cfg.grid = GridSpec{g.point("origin"), g.number("dx"), g.number("dy"), g.unsigned_int("nx"), g.unsigned_int("ny")};
    g.finish();
  }

  if (root.has("run")) {
    Reader r(root.raw("run"), "run");
    cfg.run.max_bounces = r.unsigned_int("max_bounces", 0);
    cfg.run.tol = r.number("tol", 0.0);
    const std::string mode = r.string("mode", "radar");
    if (mode == "radar") {
      cfg.run.mode = CaptureMode::Radar;
    } else if (mode == "wifi") {
      cfg.run.mode = CaptureMode::Wifi;
    } else {
      throw ConfigError("run.mode", "expected \"radar\" or \"wifi\"");
    }
    cfg.run.rng_seed = r.unsigned_int("rng_seed", 0);
    cfg.run.include_direct = r.boolean("include_direct", true);
    cfg.run.allow_wide_patches = r.boolean("allow_wide_patches", false);
    cfg.run.threads = static_cast<unsigned>(r.unsigned_int("threads", 1));
    r.finish();
  }

  if (root.has("analysis")) {
    Reader a(root.raw("analysis"), "analysis");
    cfg.analysis.first_deg = a.number("first_deg", -90.0);
    cfg.analysis.last_deg = a.number("last_deg", 90.0);
    cfg.analysis.step_deg = a.number("step_deg", 0.5);
    cfg.analysis.antenna = a.unsigned_int("antenna", 0);
    cfg.analysis.oversample = a.unsigned_int("oversample", 1);
    a.finish();
  }

  if (root.has("sweep")) {
    Reader s(root.raw("sweep"), "sweep");
    auto& sw = cfg.sweep;
    if (s.has("aperture_freqs_hz")) sw.aperture_freqs_hz = s.numbers("aperture_freqs_hz");
    sw.target_resolution_deg = s.number("target_resolution_deg", sw.target_resolution_deg);
    sw.fixed_aperture_m = s.number("fixed_aperture_m", sw.fixed_aperture_m);
    if (s.has("bandwidths_hz")) sw.bandwidths_hz = s.numbers("bandwidths_hz");
    if (s.has("object_sizes_m")) sw.object_sizes_m = s.numbers("object_sizes_m");
    if (s.has("object_angles_deg")) sw.object_angles_deg = s.numbers("object_angles_deg");
    sw.object_freq_hz = s.number("object_freq_hz", sw.object_freq_hz);
    sw.object_standoff_m = s.number("object_standoff_m", sw.object_standoff_m);
    if (s.has("widths_over_lambda")) sw.widths_over_lambda = s.numbers("widths_over_lambda");
    if (s.has("thetas_deg")) sw.thetas_deg = s.numbers("thetas_deg");
    sw.patch_freq_hz = s.number("patch_freq_hz", sw.patch_freq_hz);
    sw.quadrature_points = s.unsigned_int("quadrature_points", sw.quadrature_points);
    s.finish();
  }

  root.finish();
  return cfg;
}

/// Serializes every field, so parse(serialize(c)) == c.
inline json serialize_config(const SceneConfig& cfg) {
  using detail::to_json;
  json doc;
  doc["emitter"] = detail::emitter_to_json(cfg.emitter);
  json segs = json::array();
  for (const auto& s : cfg.segments) {
    segs.push_back({{"a", to_json(s.segment.a)},
                    {"b", to_json(s.segment.b)},
                    {"alpha", to_json(s.segment.alpha)},
                    {"normal", s.segment.side == NormalSide::Left ? "left" : "right"},
                    {"interaction", s.segment.interaction == Interaction::Reflective ? "reflective" : "aperture"},
                    {"max_width", s.max_width}});
  }
  doc["segments"] = segs;
  if (cfg.array) {
    json a{{"exposure_s", cfg.array->exposure_s}};
    if (const auto* lin = std::get_if<LinearLayout>(&cfg.array->layout)) {
      a["linear"] = {{"start", to_json(lin->start)}, {"spacing", to_json(lin->spacing)}, {"count", lin->count}};
    } else {
      json pos = json::array();
      for (const auto& p : std::get<std::vector<Vec2>>(cfg.array->layout)) pos.push_back(to_json(p));
      a["positions"] = pos;
    }
    doc["array"] = a;
  }
  if (cfg.grid)
    doc["grid"] = {{"origin", to_json(cfg.grid->origin)}, {"dx", cfg.grid->dx}, {"dy", cfg.grid->dy},
                   {"nx", cfg.grid->nx}, {"ny", cfg.grid->ny}};
  doc["run"] = {{"max_bounces", cfg.run.max_bounces},
                {"tol", cfg.run.tol},
                {"mode", to_string(cfg.run.mode)},
                {"rng_seed", cfg.run.rng_seed},
                {"include_direct", cfg.run.include_direct},
                {"allow_wide_patches", cfg.run.allow_wide_patches},
                {"threads", cfg.run.threads}};
  doc["analysis"] = {{"first_deg", cfg.analysis.first_deg},
                     {"last_deg", cfg.analysis.last_deg},
                     {"step_deg", cfg.analysis.step_deg},
                     {"antenna", cfg.analysis.antenna},
                     {"oversample", cfg.analysis.oversample}};
  const auto& sw = cfg.sweep;
  doc["sweep"] = {{"aperture_freqs_hz", sw.aperture_freqs_hz},
                  {"target_resolution_deg", sw.target_resolution_deg},
                  {"fixed_aperture_m", sw.fixed_aperture_m},
                  {"bandwidths_hz", sw.bandwidths_hz},
                  {"object_sizes_m", sw.object_sizes_m},
                  {"object_angles_deg", sw.object_angles_deg},
                  {"object_freq_hz", sw.object_freq_hz},
                  {"object_standoff_m", sw.object_standoff_m},
                  {"widths_over_lambda", sw.widths_over_lambda},
                  {"thetas_deg", sw.thetas_deg},
                  {"patch_freq_hz", sw.patch_freq_hz},
                  {"quadrature_points", sw.quadrature_points}};
  return doc;
}

/**
 * Checks every module precondition before any computation. Wide patches
 * (over lambda_min / 10) are rejected unless run.allow_wide_patches is set;
 * segments with alpha = 0 only occlude and are exempt.
 */
inline void validate(const SceneConfig& cfg) {
  try {
    rfsim::validate(cfg.emitter);
  } catch (const InvalidInput& e) {
    throw ConfigError("emitter", e.what());
  }
  std::vector<FrequencyComponent> comps;
  try {
    comps = frequency_components(cfg.emitter);
  } catch (const InvalidInput& e) {
    throw ConfigError("emitter.modulation", e.what());
  }
  double f_max = 0.0;
  for (const auto& c : comps) f_max = std::max(f_max, c.freq_hz);
  const double lambda_min = wavelength(f_max);

  for (std::size_t i = 0; i < cfg.segments.size(); ++i) {
    const std::string path = "segments[" + std::to_string(i) + "]";
    const auto& s = cfg.segments[i];
    if (!(s.segment.length() > 0.0)) throw ConfigError(path, "degenerate segment (a == b)");
    if (!(s.max_width > 0.0)) throw ConfigError(path + ".max_width", "must be positive");
    if (!std::isfinite(s.segment.alpha.real()) || !std::isfinite(s.segment.alpha.imag()))
      throw ConfigError(path + ".alpha", "must be finite");
    const double actual = s.segment.length() / std::ceil(s.segment.length() / s.max_width - 1e-9);
    if (!cfg.run.allow_wide_patches && s.segment.alpha != Phasor{0.0, 0.0} && actual > lambda_min / 10.0 * (1.0 + 1e-9))
      throw ConfigError(path + ".max_width", "patch width " + std::to_string(actual) + " m exceeds lambda_min/10 = " +
                                                 std::to_string(lambda_min / 10.0) +
                                                 " m; set run.allow_wide_patches to override");
  }
  if (cfg.array) {
    try {
      cfg.array->build();
    } catch (const InvalidInput& e) {
      throw ConfigError("array", e.what());
    }
  }
  if (cfg.grid) {
    if (!(cfg.grid->dx > 0.0) || !(cfg.grid->dy > 0.0)) throw ConfigError("grid", "dx and dy must be positive");
    if (cfg.grid->nx == 0 || cfg.grid->ny == 0) throw ConfigError("grid", "nx and ny must be positive");
  }
  if (!(cfg.run.tol >= 0.0)) throw ConfigError("run.tol", "must be non-negative");
  if (cfg.run.threads == 0) throw ConfigError("run.threads", "must be at least 1");
  if (!(cfg.analysis.step_deg > 0.0) || cfg.analysis.last_deg < cfg.analysis.first_deg)
    throw ConfigError("analysis", "angle range must have first <= last and step > 0");
  if (cfg.analysis.oversample == 0) throw ConfigError("analysis.oversample", "must be at least 1");
}

inline SceneConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string(), std::string("malformed JSON: ") + e.what());
  }
  auto cfg = parse_config(doc);
  validate(cfg);
  return cfg;
}

}  // namespace rfsim::cli
