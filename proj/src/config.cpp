// Copyright (c) 2026 The cavred authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0.txt
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cavred/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "cavred/io.hpp"

namespace cavred::config {

  namespace {

    const std::map<std::string, std::set<std::string>>& schema() {
      static const std::map<std::string, std::set<std::string>> s = {
          {"units", {"length_unit", "hbar", "c"}},
          {"geometry", {"shape", "lengths", "R", "L", "boundary"}},
          {"field", {"mass", "state", "beta"}},
          {"detector",
           {"gap", "coupling", "smearing", "sigma", "position", "r0", "phi0", "z0", "mode", "switching", "T",
            "initial_state"}},
          {"numerics", {"n_max", "tail_tolerance", "max_subfields", "ordering", "cutoff", "n_subfields"}},
      };
      return s;
    }

    std::string trim(const std::string& s) {
      const auto a = s.find_first_not_of(" \t\r\n");
      if (a == std::string::npos) return "";
      const auto b = s.find_last_not_of(" \t\r\n");
      return s.substr(a, b - a + 1);
    }

    void check_key(const std::string& section, const std::string& key, int line) {
      auto it = schema().find(section);
      if (it == schema().end()) throw ConfigError(section, "unknown section", line);
      if (!it->second.count(key)) throw ConfigError(section + "." + key, "unknown key", line);
    }

    std::string number_text(double v) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return buf;
    }

    class Reader {
    public:
      explicit Reader(const RawConfig& raw) : raw_(raw) {}

      bool has(const std::string& key) const { return raw_.count(key) > 0; }
      int line(const std::string& key) const { return has(key) ? raw_.at(key).line : 0; }

      std::string text(const std::string& key, const std::string& fallback = "") const {
        return has(key) ? raw_.at(key).value : fallback;
      }

      std::string required_text(const std::string& key) const {
        if (!has(key) || raw_.at(key).value.empty()) throw ConfigError(key, "required");
        return raw_.at(key).value;
      }

      double number(const std::string& key, const std::string& s) const {
        const std::string t = trim(s);
        if (t == "inf" || t == "infinity") return std::numeric_limits<double>::infinity();
        double v = 0.0;
        const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
        if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty())
          throw ConfigError(key, "expected a number, got '" + t + "'", line(key));
        return v;
      }

      double real(const std::string& key) const { return number(key, required_text(key)); }
      double real(const std::string& key, double fallback) const { return has(key) ? real(key) : fallback; }

      double positive(const std::string& key) const { return check_positive(key, real(key)); }
      double positive(const std::string& key, double fallback) const {
        return has(key) ? check_positive(key, real(key)) : fallback;
      }

      long integer(const std::string& key, long fallback) const {
        if (!has(key)) return fallback;
        const double v = real(key);
        if (v != std::floor(v) || std::abs(v) > 9e15) throw ConfigError(key, "expected an integer", line(key));
        return static_cast<long>(v);
      }

      std::vector<double> list(const std::string& key) const {
        std::vector<double> out;
        std::string text = required_text(key);
        std::replace(text.begin(), text.end(), ',', ' ');
        std::stringstream ss(text);
        std::string item;
        while (ss >> item) out.push_back(number(key, item));
        return out;
      }

      std::string choice(const std::string& key, const std::vector<std::string>& options, const std::string& fallback) const {
        const std::string v = has(key) ? trim(raw_.at(key).value) : fallback;
        if (std::find(options.begin(), options.end(), v) == options.end()) {
          std::string all;
          for (const auto& o : options) all += (all.empty() ? "" : ", ") + o;
          throw ConfigError(key, "must be one of {" + all + "}, got '" + v + "'", line(key));
        }
        return v;
      }

      double check_positive(const std::string& key, double v) const {
        if (!(v > 0.0) || std::isnan(v)) throw ConfigError(key, "must be positive", line(key));
        return v;
      }

    private:
      const RawConfig& raw_;
    };

    geometry::TransverseMode parse_mode(const Reader& r, const geometry::CrossSection& cs) {
      const std::string key = "detector.mode";
      std::stringstream ss(r.required_text(key));
      std::vector<int> idx;
      std::string tok;
      geometry::Parity parity = geometry::Parity::none;
      while (ss >> tok) {
        if (tok == "cos") {
          parity = geometry::Parity::cos;
        } else if (tok == "sin") {
          parity = geometry::Parity::sin;
        } else {
          const double v = r.number(key, tok);
          if (v != std::floor(v)) throw ConfigError(key, "indices must be integers", r.line(key));
          idx.push_back(static_cast<int>(v));
        }
      }
      try {
        if (cs.is_disk()) {
          if (idx.size() != 2) throw ConfigError(key, "disk modes need 'm l [cos|sin]'", r.line(key));
          if (idx[0] > 0 && parity == geometry::Parity::none) parity = geometry::Parity::cos;
          return geometry::disk_eigenpair(cs.radius(), idx[0], idx[1], parity);
        }
        return geometry::rectangle_eigenpair(cs.lengths(), idx, cs.boundary());
      } catch (const DomainError& e) {
        throw ConfigError(key, e.what(), r.line(key));
      }
    }

  } // namespace

  RawConfig parse_text(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int number = 0;
    while (std::getline(in, line)) {
      ++number;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') throw ConfigError("", "malformed section header", number);
        section = trim(line.substr(1, line.size() - 2));
        if (!schema().count(section)) throw ConfigError(section, "unknown section", number);
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError(section, "expected 'key = value'", number);
      if (section.empty()) throw ConfigError("", "key outside of a section", number);
      const std::string key = trim(line.substr(0, eq));
      check_key(section, key, number);
      const std::string full = section + "." + key;
      if (raw.count(full)) throw ConfigError(full, "duplicate key", number);
      raw[full] = {trim(line.substr(eq + 1)), number};
    }
    return raw;
  }

  RawConfig parse_json(const std::string& text) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("", "top level must be an object");
    RawConfig raw;
    for (auto& [section, body] : j.items()) {
      if (!schema().count(section)) throw ConfigError(section, "unknown section");
      if (!body.is_object()) throw ConfigError(section, "section must be an object");
      for (auto& [key, value] : body.items()) {
        check_key(section, key, 0);
        std::string v;
        if (value.is_string()) {
          v = value.get<std::string>();
        } else if (value.is_number()) {
          v = number_text(value.get<double>());
        } else if (value.is_array()) {
          for (const auto& item : value) {
            if (!v.empty()) v += ", ";
            if (item.is_number()) v += number_text(item.get<double>());
            else if (item.is_string()) v += item.get<std::string>();
            else throw ConfigError(section + "." + key, "array items must be numbers or strings");
          }
        } else {
          throw ConfigError(section + "." + key, "unsupported value type");
        }
        raw[section + "." + key] = {trim(v), 0};
      }
    }
    return raw;
  }

  ScenarioConfig build(const RawConfig& raw) {
    Reader r(raw);
    ScenarioConfig cfg;
    cfg.raw = raw;
    cfg.length_unit = trim(r.required_text("units.length_unit"));

    subfields::Units units;
    units.hbar = r.positive("units.hbar", 1.0);
    units.c = r.positive("units.c", 1.0);

    const std::string shape = r.choice("geometry.shape", {"rectangle", "disk"}, r.required_text("geometry.shape"));
    const std::string bc = r.choice("geometry.boundary", {"dirichlet", "neumann"}, "dirichlet");
    const auto boundary = bc == "dirichlet" ? geometry::Boundary::dirichlet : geometry::Boundary::neumann;
    geometry::CrossSection cs;
    if (shape == "disk") {
      if (boundary != geometry::Boundary::dirichlet)
        throw ConfigError("geometry.boundary", "the disk supports dirichlet only", r.line("geometry.boundary"));
      cs = geometry::CrossSection::disk(r.positive("geometry.R"));
    } else {
      auto lengths = r.list("geometry.lengths");
      if (lengths.empty()) throw ConfigError("geometry.lengths", "at least one length required", r.line("geometry.lengths"));
      for (double l : lengths) r.check_positive("geometry.lengths", l);
      cs = geometry::CrossSection::rectangle(lengths, boundary);
    }
    const double L = r.positive("geometry.L");
    const double mass = r.real("field.mass", 0.0);
    if (!(mass >= 0.0)) throw ConfigError("field.mass", "must be non-negative", r.line("field.mass"));
    cfg.scenario.field = subfields::CavityField{cs, L, mass, units};

    const std::string state = r.choice("field.state", {"vacuum", "thermal"}, "vacuum");
    if (state == "thermal")
      cfg.scenario.state = response::FieldState::thermal(r.positive("field.beta"));
    else
      cfg.scenario.state = response::FieldState::vacuum();

    auto& d = cfg.scenario.detector;
    d.gap = r.positive("detector.gap");
    d.coupling = r.real("detector.coupling", 1.0);
    const double z0 = r.real("detector.z0", 0.5 * L);
    if (!(z0 > 0.0 && z0 < L)) throw ConfigError("detector.z0", "must lie strictly inside (0, L)", r.line("detector.z0"));
    detector::Position pos;
    if (cs.is_disk()) {
      const double r0 = r.real("detector.r0", 0.0);
      if (!(r0 >= 0.0 && r0 < cs.radius())) throw ConfigError("detector.r0", "must lie in [0, R)", r.line("detector.r0"));
      pos = detector::Position::polar(r0, r.real("detector.phi0", 0.0), z0);
    } else {
      if (r.has("detector.position")) {
        pos.y = r.list("detector.position");
        if (static_cast<int>(pos.y.size()) != cs.dimension())
          throw ConfigError("detector.position", "needs one coordinate per transverse dimension", r.line("detector.position"));
        if (!cs.contains(pos.y))
          throw ConfigError("detector.position", "lies outside the cross-section", r.line("detector.position"));
      } else {
        for (double l : cs.lengths()) pos.y.push_back(0.5 * l);
      }
      pos.z = z0;
    }
    const std::string smearing = r.choice("detector.smearing", {"gaussian", "pointlike", "mode"}, "gaussian");
    if (smearing == "gaussian")
      d.smearing = detector::Smearing::gaussian(r.positive("detector.sigma"), pos);
    else if (smearing == "pointlike")
      d.smearing = detector::Smearing::pointlike(pos);
    else
      d.smearing = detector::Smearing::transverse_mode(parse_mode(r, cs), r.positive("detector.sigma"), z0);

    const std::string sw = r.choice("detector.switching", {"gaussian", "sudden"}, "gaussian");
    const double T = r.positive("detector.T");
    d.switching = sw == "gaussian" ? detector::Switching::gaussian(T) : detector::Switching::sudden(T);
    const std::string init = r.choice("detector.initial_state", {"ground", "excited"}, "ground");
    d.initial_state = init == "ground" ? detector::InitialState::ground : detector::InitialState::excited;

    auto& c = cfg.controls;
    c.n_max = r.integer("numerics.n_max", c.n_max);
    if (c.n_max < 1) throw ConfigError("numerics.n_max", "must be >= 1", r.line("numerics.n_max"));
    c.tail_tolerance = r.positive("numerics.tail_tolerance", c.tail_tolerance);
    const long ms = r.integer("numerics.max_subfields", static_cast<long>(c.max_subfields));
    if (ms < 1) throw ConfigError("numerics.max_subfields", "must be >= 1", r.line("numerics.max_subfields"));
    c.max_subfields = static_cast<std::size_t>(ms);
    c.ordering = r.choice("numerics.ordering", {"ascending_mass", "resonant_first"}, "ascending_mass") == "ascending_mass"
                     ? response::Ordering::ascending_mass
                     : response::Ordering::resonant_first;
    cfg.spectrum_cutoff = r.has("numerics.cutoff") ? r.positive("numerics.cutoff") : 0.0;
    const long ns = r.integer("numerics.n_subfields", 30);
    if (ns < 1) throw ConfigError("numerics.n_subfields", "must be >= 1", r.line("numerics.n_subfields"));
    cfg.n_subfields = static_cast<std::size_t>(ns);

    try {
      cfg.warnings = cfg.scenario.validate();
    } catch (const DomainError& e) {
      throw ConfigError("detector", e.what());
    }
    return cfg;
  }

  std::string ScenarioConfig::canonical_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [key, entry] : raw) {
      const auto dot = key.find('.');
      j[key.substr(0, dot)][key.substr(dot + 1)] = entry.value;
    }
    return j.dump();
  }

  std::string ScenarioConfig::hash() const { return io::hex64(io::fnv1a(canonical_json())); }

  ScenarioConfig from_text(const std::string& text) { return build(parse_text(text)); }

  ScenarioConfig load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return build(path.extension() == ".json" ? parse_json(ss.str()) : parse_text(ss.str()));
  }

  namespace {
    RawConfig from_pairs(std::initializer_list<std::pair<const char*, const char*>> pairs) {
      RawConfig raw;
      for (const auto& [k, v] : pairs) raw[k] = {v, 0};
      return raw;
    }
  } // namespace

  std::vector<std::string> preset_names() {
    return {"superconducting", "optical", "fig2-yellow", "fig2-green", "fig3", "fig4"};
  }

  RawConfig preset(const std::string& name) {
    // Cylinder presets: R = 1 sets the length unit, L / R = 1000.
    if (name == "superconducting" || name == "fig3")
      return from_pairs({{"units.length_unit", "R"}, {"geometry.shape", "disk"}, {"geometry.R", "1"},
                         {"geometry.L", "1000"}, {"detector.gap", "0.01"}, {"detector.sigma", "0.01"},
                         {"detector.switching", "gaussian"}, {"detector.T", "1000"},
                         {"detector.initial_state", "ground"}});
    if (name == "optical")
      return from_pairs({{"units.length_unit", "R"}, {"geometry.shape", "disk"}, {"geometry.R", "1"},
                         {"geometry.L", "1000"}, {"detector.gap", "10"}, {"detector.sigma", "1e-6"},
                         {"detector.switching", "gaussian"}, {"detector.T", "1"}, {"detector.initial_state", "ground"}});
    if (name == "fig2-yellow" || name == "fig2-green") {
      RawConfig raw = from_pairs({{"units.length_unit", "sigma"}, {"geometry.shape", "rectangle"},
                                  {"geometry.lengths", "20, 20"}, {"geometry.L", "1000"}, {"detector.gap", "1"},
                                  {"detector.sigma", "1"}, {"detector.switching", "gaussian"}, {"detector.T", "1"},
                                  {"detector.initial_state", "excited"}});
      if (name == "fig2-green") {
        raw["field.state"] = {"thermal", 0};
        raw["field.beta"] = {"0.1", 0};
      }
      return raw;
    }
    if (name == "fig4")
      // gap = 0.004 x_{01} / R, T = 10 / gap
      return from_pairs({{"units.length_unit", "R"}, {"geometry.shape", "disk"}, {"geometry.R", "1"},
                         {"geometry.L", "1000"}, {"detector.gap", "0.009619302230783092"}, {"detector.sigma", "0.01"},
                         {"detector.switching", "sudden"}, {"detector.T", "1039.5929121"},
                         {"detector.initial_state", "excited"}});
    throw ConfigError("preset", "unknown preset '" + name + "'");
  }

  void apply_override(RawConfig& raw, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("", "override must look like section.key=value");
    const std::string key = trim(assignment.substr(0, eq));
    const auto dot = key.find('.');
    if (dot == std::string::npos) throw ConfigError(key, "override key must be section.key");
    check_key(key.substr(0, dot), key.substr(dot + 1), 0);
    raw[key] = {trim(assignment.substr(eq + 1)), 0};
  }

} // namespace cavred::config
