#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "transpin/cli.hpp"
#include "transpin/errors.hpp"
#include "transpin/observables.hpp"

namespace transpin::cli {

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(join(path, key), "unknown key");
  }
}

const json& object_at(const json& parent, const std::string& key, const std::string& path) {
  const std::string full = join(path, key);
  if (!parent.contains(key)) fail(full, "required");
  const json& v = parent.at(key);
  if (!v.is_object()) fail(full, "expected an object");
  return v;
}

double number_at(const json& obj, const std::string& key, const std::string& path) {
  const std::string full = join(path, key);
  if (!obj.contains(key)) fail(full, "required");
  const json& v = obj.at(key);
  if (!v.is_number()) fail(full, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(full, "expected a finite number");
  return d;
}

double positive_at(const json& obj, const std::string& key, const std::string& path) {
  const double d = number_at(obj, key, path);
  if (!(d > 0.0)) fail(join(path, key), "must be positive");
  return d;
}

long integer_at(const json& obj, const std::string& key, const std::string& path) {
  const std::string full = join(path, key);
  if (!obj.contains(key)) fail(full, "required");
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(full, "expected an integer");
  return v.get<long>();
}

std::string string_at(const json& obj, const std::string& key, const std::string& path) {
  const std::string full = join(path, key);
  if (!obj.contains(key)) fail(full, "required");
  const json& v = obj.at(key);
  if (!v.is_string()) fail(full, "expected a string");
  return v.get<std::string>();
}

Family parse_family(const std::string& s, const std::string& key) {
  if (s == "TM" || s == "tm") return Family::TM;
  if (s == "TE" || s == "te") return Family::TE;
  fail(key, "expected \"TM\" or \"TE\", got \"" + s + "\"");
}

Direction parse_direction(const json& obj, const std::string& path) {
  if (!obj.contains("direction")) return Direction::Forward;
  const std::string s = string_at(obj, "direction", path);
  if (s == "+z" || s == "forward") return Direction::Forward;
  if (s == "-z" || s == "backward") return Direction::Backward;
  fail(join(path, "direction"), "expected \"+z\" or \"-z\", got \"" + s + "\"");
}

int quanta_at(const json& obj, const std::string& path) {
  const long n = integer_at(obj, "n_quanta", path);
  if (n < 1 || n > 1000000000L) fail(join(path, "n_quanta"), "must be a positive integer");
  return static_cast<int>(n);
}

void exclusive(const json& obj, const std::string& a, const std::string& b, const std::string& path) {
  if (obj.contains(a) && obj.contains(b)) {
    fail(join(path, b), "conflicts with '" + join(path, a) + "'; give one of them");
  }
}

template <class F>
void rethrow_as_config(const std::string& key, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(key, e.what());
  }
}

GuidedModeSpec parse_guided(const json& doc, const RunConfig& cfg) {
  const std::string path = "guided";
  const json& g = object_at(doc, "guided", "");
  reject_unknown(g,
                 {"geometry", "index", "omega", "omega_over_cutoff", "amplitude_h", "n_quanta",
                  "direction"},
                 path);
  GuidedModeSpec spec;
  spec.constants = PhysicalConstants::of(cfg.units);

  const std::string gpath = "guided.geometry";
  const json& geo = object_at(g, "geometry", path);
  reject_unknown(geo, {"a", "b", "L"}, gpath);
  spec.geometry = {number_at(geo, "a", gpath), number_at(geo, "b", gpath),
                   number_at(geo, "L", gpath)};
  rethrow_as_config(gpath, [&] { spec.geometry.validate(); });

  const std::string ipath = "guided.index";
  const json& idx = object_at(g, "index", path);
  reject_unknown(idx, {"family", "m", "n"}, ipath);
  const long m = integer_at(idx, "m", ipath);
  const long n = integer_at(idx, "n", ipath);
  if (std::abs(m) > 10000 || std::abs(n) > 10000) fail(ipath, "mode index out of range");
  spec.index = {parse_family(string_at(idx, "family", ipath), join(ipath, "family")),
                static_cast<int>(m), static_cast<int>(n)};
  rethrow_as_config(ipath, [&] { spec.index.validate(); });

  spec.direction = parse_direction(g, path);

  exclusive(g, "omega", "omega_over_cutoff", path);
  const double wc = cutoff_frequency(spec.geometry, spec.index, spec.constants);
  if (g.contains("omega_over_cutoff")) {
    spec.omega = positive_at(g, "omega_over_cutoff", path) * wc;
  } else if (g.contains("omega")) {
    spec.omega = positive_at(g, "omega", path);
  } else {
    fail("guided.omega", "required (or give guided.omega_over_cutoff)");
  }

  exclusive(g, "amplitude_h", "n_quanta", path);
  if (cfg.paper_figures) {
    for (const char* key : {"amplitude_h", "n_quanta"}) {
      if (g.contains(key)) fail("normalize", std::string("paper-figures conflicts with guided.") + key);
    }
    const GuidedModeParams p = guided_params(spec);
    if (!p.propagating) fail("normalize", "paper-figures needs a propagating mode");
    // pi kz h^2 / (2 mu0 wc^2 w) = 1
    spec.amplitude_h = std::sqrt(2.0 * spec.constants.mu0 * p.omega_c * p.omega_c * spec.omega /
                                 (kPi * std::abs(p.k_z.real())));
  } else if (g.contains("amplitude_h")) {
    spec.amplitude_h = positive_at(g, "amplitude_h", path);
  } else {
    const int quanta = g.contains("n_quanta") ? quanta_at(g, path) : 1;
    rethrow_as_config(join(path, "n_quanta"),
                      [&] { spec.amplitude_h = amplitude_for_quanta(quanta, spec); });
  }
  rethrow_as_config(path, [&] { spec.validate(); });
  return spec;
}

SurfaceWaveSpec parse_surface(const json& doc, const RunConfig& cfg) {
  const std::string path = "surface";
  const json& s = object_at(doc, "surface", "");
  reject_unknown(s,
                 {"family", "eta", "phi", "phi_deg", "omega", "amplitude_hp", "n_quanta", "area_A",
                  "direction"},
                 path);
  if (cfg.paper_figures) fail("normalize", "paper-figures applies to guided modes only");
  SurfaceWaveSpec spec;
  spec.constants = PhysicalConstants::of(cfg.units);
  spec.family = parse_family(string_at(s, "family", path), "surface.family");
  spec.eta = positive_at(s, "eta", path);
  exclusive(s, "phi", "phi_deg", path);
  if (s.contains("phi_deg")) {
    spec.phi = number_at(s, "phi_deg", path) * kPi / 180.0;
  } else if (s.contains("phi")) {
    spec.phi = number_at(s, "phi", path);
  } else {
    fail("surface.phi", "required (or give surface.phi_deg)");
  }
  if (!(std::sin(spec.phi) * spec.eta > 1.0)) {
    fail(s.contains("phi_deg") ? "surface.phi_deg" : "surface.phi",
         "eta * sin(phi) must exceed 1 for an evanescent surface wave");
  }
  spec.omega = positive_at(s, "omega", path);
  spec.area_A = s.contains("area_A") ? positive_at(s, "area_A", path) : 1.0;
  spec.direction = parse_direction(s, path);

  exclusive(s, "amplitude_hp", "n_quanta", path);
  if (s.contains("amplitude_hp")) {
    spec.amplitude_hp = positive_at(s, "amplitude_hp", path);
  } else {
    const int quanta = s.contains("n_quanta") ? quanta_at(s, path) : 1;
    spec.amplitude_hp = amplitude_for_quanta(quanta, spec);
  }
  rethrow_as_config(path, [&] { spec.validate(); });
  return spec;
}

// Last object key that appears before byte `pos`.
std::string last_key_before(std::string_view text, std::size_t pos) {
  static const std::regex key_re(R"re("((?:[^"\\]|\\.)*)"\s*:)re");
  const std::string prefix(text.substr(0, std::min(pos, text.size())));
  std::string last;
  for (auto it = std::sregex_iterator(prefix.begin(), prefix.end(), key_re);
       it != std::sregex_iterator(); ++it) {
    last = (*it)[1].str();
  }
  return last;
}

enum class ValueType { Number, Integer, Text };

struct FlagSpec {
  std::string flag;
  std::string guided;   // JSON pointer, empty when not applicable
  std::string surface;
  ValueType type;
  std::vector<std::string> displaces;  // sibling keys removed when the flag is set
};

const std::vector<FlagSpec>& flag_specs() {
  static const std::vector<FlagSpec> specs{
      {"mode", "/mode", "/mode", ValueType::Text, {}},
      {"units", "/units", "/units", ValueType::Text, {}},
      {"output", "/output", "/output", ValueType::Text, {}},
      {"combination", "/combination", "/combination", ValueType::Text, {}},
      {"normalize", "/normalize", "/normalize", ValueType::Text, {}},
      {"nx", "/grid/nx", "/grid/nx", ValueType::Integer, {}},
      {"ny", "/grid/ny", "/grid/ny", ValueType::Integer, {}},
      {"family", "/guided/index/family", "/surface/family", ValueType::Text, {}},
      {"index-m", "/guided/index/m", "", ValueType::Integer, {}},
      {"index-n", "/guided/index/n", "", ValueType::Integer, {}},
      {"geometry-a", "/guided/geometry/a", "", ValueType::Number, {}},
      {"geometry-b", "/guided/geometry/b", "", ValueType::Number, {}},
      {"geometry-L", "/guided/geometry/L", "", ValueType::Number, {}},
      {"omega", "/guided/omega", "/surface/omega", ValueType::Number, {"omega_over_cutoff"}},
      {"omega-over-cutoff", "/guided/omega_over_cutoff", "", ValueType::Number, {"omega"}},
      {"amplitude-h", "/guided/amplitude_h", "", ValueType::Number, {"n_quanta"}},
      {"amplitude-hp", "", "/surface/amplitude_hp", ValueType::Number, {"n_quanta"}},
      {"n-quanta", "/guided/n_quanta", "/surface/n_quanta", ValueType::Integer,
       {"amplitude_h", "amplitude_hp"}},
      {"direction", "/guided/direction", "/surface/direction", ValueType::Text, {}},
      {"eta", "", "/surface/eta", ValueType::Number, {}},
      {"phi", "", "/surface/phi", ValueType::Number, {"phi_deg"}},
      {"phi-deg", "", "/surface/phi_deg", ValueType::Number, {"phi"}},
      {"area-A", "", "/surface/area_A", ValueType::Number, {}},
  };
  return specs;
}

json convert(const FlagSpec& spec, const std::string& raw) {
  const char* first = raw.data();
  const char* last = raw.data() + raw.size();
  if (spec.type == ValueType::Text) return raw;
  if (spec.type == ValueType::Integer) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      throw ConfigError("flag --" + spec.flag + ": expected an integer, got '" + raw + "'");
    }
    return v;
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("flag --" + spec.flag + ": expected a number, got '" + raw + "'");
  }
  return v;
}

}  // namespace

json parse_config_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::string key = last_key_before(text, e.byte == 0 ? 0 : e.byte - 1);
    std::ostringstream msg;
    msg << "malformed JSON at byte " << e.byte;
    if (key.empty()) {
      msg << " before any key";
    } else {
      msg << " after key '" << key << "'";
    }
    msg << ": " << e.what();
    throw ConfigError(msg.str());
  }
}

json load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading config file '" + path + "'");
  return parse_config_text(buf.str());
}

const std::vector<std::string>& override_flags() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : flag_specs()) out.push_back(s.flag);
    return out;
  }();
  return names;
}

void apply_overrides(json& doc, const std::vector<FlagOverride>& overrides) {
  if (!doc.is_object()) throw ConfigError("config key '': expected a JSON object at top level");
  const auto find = [](const std::string& flag) -> const FlagSpec& {
    const auto& specs = flag_specs();
    const auto it = std::find_if(specs.begin(), specs.end(),
                                 [&](const FlagSpec& s) { return s.flag == flag; });
    if (it == specs.end()) throw ConfigError("unknown override flag --" + flag);
    return *it;
  };
  // Mode first, so shared flags land in the right section.
  for (const auto& o : overrides) {
    if (o.flag == "mode") doc["mode"] = o.value;
  }
  const bool surface = doc.contains("mode") && doc["mode"] == "surface";
  for (const auto& o : overrides) {
    if (o.flag == "mode") continue;
    const FlagSpec& spec = find(o.flag);
    const std::string& ptr = surface ? spec.surface : spec.guided;
    if (ptr.empty()) {
      throw ConfigError("flag --" + o.flag + " does not apply to " +
                        (surface ? "surface" : "guided") + " mode");
    }
    const json::json_pointer p(ptr);
    json& parent = doc[p.parent_pointer()];
    if (!parent.is_object() && !parent.is_null()) {
      throw ConfigError("flag --" + o.flag + ": config section '" +
                        p.parent_pointer().to_string() + "' is not an object");
    }
    if (parent.is_object()) {
      for (const auto& key : spec.displaces) parent.erase(key);
    }
    doc[p] = convert(spec, o.value);
  }
}

RunConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config key '': expected a JSON object at top level");
  reject_unknown(doc,
                 {"mode", "units", "guided", "surface", "grid", "output", "combination",
                  "normalize"},
                 "");
  RunConfig cfg;

  const std::string mode = string_at(doc, "mode", "");
  if (mode == "guided") {
    cfg.kind = ModeKind::Guided;
  } else if (mode == "surface") {
    cfg.kind = ModeKind::Surface;
  } else {
    fail("mode", "expected \"guided\" or \"surface\", got \"" + mode + "\"");
  }

  if (doc.contains("units")) {
    const std::string u = string_at(doc, "units", "");
    if (u == "SI" || u == "si") {
      cfg.units = UnitSystem::SI;
    } else if (u == "natural") {
      cfg.units = UnitSystem::Natural;
    } else {
      fail("units", "expected \"SI\" or \"natural\", got \"" + u + "\"");
    }
  }

  if (doc.contains("combination")) {
    const std::string c = string_at(doc, "combination", "");
    if (c == "sum") {
      cfg.combination = SpinCombination::Sum;
    } else if (c == "average") {
      cfg.combination = SpinCombination::Average;
    } else {
      fail("combination", "expected \"sum\" or \"average\", got \"" + c + "\"");
    }
  }

  if (doc.contains("normalize")) {
    const std::string n = string_at(doc, "normalize", "");
    if (n == "paper-figures") {
      cfg.paper_figures = true;
    } else if (n != "none") {
      fail("normalize", "expected \"none\" or \"paper-figures\", got \"" + n + "\"");
    }
  }

  if (doc.contains("grid")) {
    const json& grid = object_at(doc, "grid", "");
    reject_unknown(grid, {"nx", "ny"}, "grid");
    for (const char* key : {"nx", "ny"}) {
      if (!grid.contains(key)) continue;
      const long v = integer_at(grid, key, "grid");
      if (v < 2 || v > 100000) fail(join("grid", key), "must be between 2 and 100000");
      (std::string(key) == "nx" ? cfg.nx : cfg.ny) = static_cast<int>(v);
    }
  }

  if (doc.contains("output")) cfg.output = string_at(doc, "output", "");

  if (cfg.kind == ModeKind::Guided) {
    cfg.guided = parse_guided(doc, cfg);
  } else {
    cfg.surface = parse_surface(doc, cfg);
  }
  return cfg;
}

}  // namespace transpin::cli
