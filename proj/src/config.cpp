#include "chiralcav/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "chiralcav/error.hpp"

namespace chiralcav {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Unit {
  std::string_view name;
  double scale;
};

const std::map<Dimension, std::vector<Unit>>& unit_table() {
  static const std::map<Dimension, std::vector<Unit>> table = {
      {Dimension::None, {}},
      {Dimension::Frequency,
       {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}, {"rad/s", 1.0 / constants::two_pi}}},
      {Dimension::Rate,
       {{"Hz", constants::two_pi},
        {"kHz", constants::two_pi * 1e3},
        {"MHz", constants::two_pi * 1e6},
        {"GHz", constants::two_pi * 1e9},
        {"rad/s", 1.0}}},
      {Dimension::Length, {{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}}},
      {Dimension::Speed, {{"m/s", 1.0}, {"cm/s", 1e-2}, {"mm/s", 1e-3}, {"km/s", 1e3}}},
      {Dimension::Time, {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}}},
      {Dimension::Dipole, {{"D", constants::debye}, {"C*m", 1.0}, {"Cm", 1.0}}},
      {Dimension::Angle, {{"rad", 1.0}, {"deg", constants::pi / 180.0}}},
      {Dimension::PerSecond, {{"1/s", 1.0}, {"/s", 1.0}}},
  };
  return table;
}

// Default scale for a bare number.
double bare_scale(Dimension dimension) {
  return dimension == Dimension::Rate ? constants::two_pi : 1.0;
}

std::optional<double> parse_pi_multiple(std::string_view s) {
  // [sign][number]pi[/number]
  double sign = 1.0;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    sign = s.front() == '-' ? -1.0 : 1.0;
    s.remove_prefix(1);
  }
  const auto pos = s.find("pi");
  if (pos == std::string_view::npos) return std::nullopt;
  double factor = 1.0;
  if (pos > 0) {
    auto head = trim(s.substr(0, pos));
    if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
    const auto [p, ec] = std::from_chars(head.data(), head.data() + head.size(), factor);
    if (ec != std::errc() || p != head.data() + head.size()) return std::nullopt;
  }
  auto tail = trim(s.substr(pos + 2));
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') return std::nullopt;
    tail = trim(tail.substr(1));
    const auto [p, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), divisor);
    if (ec != std::errc() || p != tail.data() + tail.size() || divisor == 0.0) return std::nullopt;
  }
  return sign * factor * constants::pi / divisor;
}

// A raw entry with its source position.
struct Entry {
  std::string value;
  int line = 0;
  int column = 0;
};

using Section = std::map<std::string, Entry>;
using Document = std::map<std::string, Section>;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"molecule", {"preset", "chirality", "A", "B", "C", "mu_a", "mu_b", "mu_c"}},
      {"cavity", {"R_m", "q", "f_target", "g0", "kappa", "w0"}},
      {"mirror", {"f_ref", "d_ref", "Q_ref", "tuning_ref", "precision_ref", "stroke", "step"}},
      {"drive", {"lambda", "eta", "Delta_m", "Delta_c"}},
      {"sample",
       {"N_m", "v", "Ybar0", "trapped", "trap_entry", "trap_time", "sigma_z0", "L"}},
      {"detection", {"phi_lo", "N_lo", "M_Y", "t0", "tf"}},
      {"integrator",
       {"rtol", "atol", "max_step", "initial_step", "max_steps", "samples_per_tau",
        "trapped_samples"}},
      {"dissipation", {"gamma", "V_max"}},
      {"run", {"model", "seed"}},
  };
  return keys;
}

[[noreturn]] void fail_at(const Entry& e, const std::string& what) {
  throw ParseError(e.line, e.column, what);
}

class Reader {
 public:
  explicit Reader(const Document& doc) : doc_(doc) {}

  const Entry* find(const std::string& section, const std::string& key) const {
    const auto s = doc_.find(section);
    if (s == doc_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  bool has_section(const std::string& section) const { return doc_.count(section) != 0; }

  std::optional<double> quantity(const std::string& section, const std::string& key,
                                 Dimension dim) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    try {
      return parse_quantity(e->value, dim);
    } catch (const Error& err) {
      fail_at(*e, section + "." + key + ": " + err.what());
    }
  }

  std::optional<long long> integer(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    std::string_view v = e->value;
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    long long out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
      fail_at(*e, section + "." + key + ": expected an integer, got '" + e->value + "'");
    return out;
  }

  std::optional<std::uint64_t> unsigned_integer(const std::string& section,
                                                const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    std::uint64_t out = 0;
    const auto& v = e->value;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
      fail_at(*e, section + "." + key + ": expected an unsigned integer, got '" + v + "'");
    return out;
  }

  std::optional<bool> boolean(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    const auto& v = e->value;
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    fail_at(*e, section + "." + key + ": expected true or false, got '" + v + "'");
  }

  std::optional<std::string> text(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    return e->value;
  }

 private:
  const Document& doc_;
};

LoadedConfig build(const Document& doc) {
  LoadedConfig out;
  Scenario& s = out.scenario;
  const Reader r(doc);

  // Molecule.
  if (!r.has_section("molecule")) {
    out.notices.push_back("no [molecule] section; using the propanediol preset");
  }
  if (const auto preset = r.text("molecule", "preset")) {
    if (*preset != "propanediol")
      fail_at(*r.find("molecule", "preset"), "unknown molecule preset '" + *preset + "'");
  }
  if (const auto* e = r.find("molecule", "chirality")) {
    try {
      s.molecule.chirality = parse_chirality(e->value);
    } catch (const Error& err) {
      fail_at(*e, err.what());
    }
  }
  if (auto v = r.quantity("molecule", "A", Dimension::Rate)) s.molecule.A = *v;
  if (auto v = r.quantity("molecule", "B", Dimension::Rate)) s.molecule.B = *v;
  if (auto v = r.quantity("molecule", "C", Dimension::Rate)) s.molecule.C = *v;
  if (auto v = r.quantity("molecule", "mu_a", Dimension::Dipole)) s.molecule.mu_a = *v;
  if (auto v = r.quantity("molecule", "mu_b", Dimension::Dipole)) s.molecule.mu_b = *v;
  if (auto v = r.quantity("molecule", "mu_c", Dimension::Dipole)) s.molecule.mu_c = *v;
  s.molecule.validate();

  // Cavity design, then explicit overrides.
  MirrorReference mirror;
  if (auto v = r.quantity("mirror", "f_ref", Dimension::Frequency)) mirror.f_ref = *v;
  if (auto v = r.quantity("mirror", "d_ref", Dimension::Length)) mirror.d_ref = *v;
  if (auto v = r.quantity("mirror", "Q_ref", Dimension::None)) mirror.Q_ref = *v;
  if (auto v = r.quantity("mirror", "tuning_ref", Dimension::Frequency)) mirror.tuning_ref = *v;
  if (auto v = r.quantity("mirror", "precision_ref", Dimension::Frequency)) mirror.precision_ref = *v;
  if (auto v = r.quantity("mirror", "stroke", Dimension::Length)) mirror.stroke = *v;
  if (auto v = r.quantity("mirror", "step", Dimension::Length)) mirror.step = *v;
  mirror.validate();
  const double R_m = r.quantity("cavity", "R_m", Dimension::Length).value_or(propanediol_mirror_radius);
  const auto q = r.integer("cavity", "q").value_or(0);
  if (q < 0 || q > 1000) fail_at(*r.find("cavity", "q"), "cavity.q must be in 0..1000");
  const double f_target =
      r.quantity("cavity", "f_target", Dimension::Frequency).value_or(propanediol_target_frequency);
  s.cavity = design_cavity(R_m, static_cast<int>(q), f_target, s.molecule.mu_b, mirror);
  if (auto v = r.quantity("cavity", "g0", Dimension::Rate)) s.cavity.g0 = *v;
  if (auto v = r.quantity("cavity", "kappa", Dimension::Rate)) s.cavity.kappa = *v;
  if (auto v = r.quantity("cavity", "w0", Dimension::Length)) s.cavity.w0 = *v;

  // Drive: lambda and eta are tied through kappa sqrt(lambda N_cr).
  if (auto v = r.quantity("drive", "Delta_m", Dimension::Rate)) s.drive.Delta_m = *v;
  if (auto v = r.quantity("drive", "Delta_c", Dimension::Rate)) s.drive.Delta_c = *v;
  const auto lambda = r.quantity("drive", "lambda", Dimension::None);
  const auto eta = r.quantity("drive", "eta", Dimension::Rate);
  if (lambda) s.drive.lambda = *lambda;
  if (eta) {
    s.drive.eta = *eta;
    if (!lambda) {
      const double ratio = *eta / s.cavity.kappa;
      s.drive.lambda = ratio * ratio / s.N_cr();
    }
  }

  // Sample.
  if (auto v = r.quantity("sample", "N_m", Dimension::None)) s.sample.N_m = *v;
  if (auto v = r.quantity("sample", "v", Dimension::Speed)) s.sample.v = *v;
  if (auto v = r.quantity("sample", "Ybar0", Dimension::Length)) s.sample.Ybar0 = *v;
  if (auto v = r.boolean("sample", "trapped")) s.sample.trapped = *v;
  if (auto v = r.boolean("sample", "trap_entry")) s.sample.trap_entry = *v;
  if (auto v = r.quantity("sample", "trap_time", Dimension::Time)) s.sample.trap_time = *v;
  if (auto v = r.integer("sample", "sigma_z0")) s.sample.sigma_z0 = static_cast<int>(*v);
  if (auto v = r.quantity("sample", "L", Dimension::Length)) s.sample.L = *v;
  if (s.sample.trap_entry) s.sample.trapped = true;

  // Detection.
  if (auto v = r.quantity("detection", "phi_lo", Dimension::Angle)) s.detection.phi_lo = *v;
  if (auto v = r.quantity("detection", "N_lo", Dimension::PerSecond)) s.detection.N_lo = *v;
  if (auto v = r.quantity("detection", "M_Y", Dimension::None)) s.detection.M_Y = *v;
  if (auto v = r.quantity("detection", "t0", Dimension::Time)) s.detection.t0 = *v;
  if (auto v = r.quantity("detection", "tf", Dimension::Time)) s.detection.tf = *v;

  // Integrator.
  if (auto v = r.quantity("integrator", "rtol", Dimension::None)) s.integrator.rtol = *v;
  if (auto v = r.quantity("integrator", "atol", Dimension::None)) s.integrator.atol = *v;
  if (auto v = r.quantity("integrator", "max_step", Dimension::Time)) s.integrator.max_step = *v;
  if (auto v = r.quantity("integrator", "initial_step", Dimension::Time)) s.integrator.initial_step = *v;
  if (auto v = r.unsigned_integer("integrator", "max_steps")) s.integrator.max_steps = *v;
  if (auto v = r.quantity("integrator", "samples_per_tau", Dimension::None)) s.samples_per_tau = *v;
  if (auto v = r.unsigned_integer("integrator", "trapped_samples")) s.trapped_samples = *v;

  // Dissipation: both or neither; absent means molecule-derived bounds.
  const auto gamma = r.quantity("dissipation", "gamma", Dimension::Rate);
  const auto vmax = r.quantity("dissipation", "V_max", Dimension::Rate);
  if (gamma || vmax) {
    const auto derived = s.dissipation_params();
    s.dissipation = DissipationParams{gamma.value_or(derived.gamma), vmax.value_or(derived.V_max)};
  }

  if (const auto* e = r.find("run", "model")) {
    try {
      s.model = parse_model(e->value);
    } catch (const Error& err) {
      fail_at(*e, err.what());
    }
  }
  if (auto v = r.unsigned_integer("run", "seed")) s.seed = *v;

  s.validate();
  return out;
}

void insert_entry(Document& doc, const std::string& section, const std::string& key, Entry entry,
                  int key_column) {
  const auto& keys = schema();
  const auto known = keys.find(section);
  if (known->second.count(key) == 0)
    throw ParseError(entry.line, key_column, "unknown key '" + key + "' in [" + section + "]");
  auto& sec = doc[section];
  if (sec.count(key) != 0)
    throw ParseError(entry.line, key_column, "duplicate key '" + key + "' in [" + section + "]");
  sec[key] = std::move(entry);
}

std::string number_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double parse_quantity(std::string_view text, Dimension dimension) {
  const std::string_view s = trim(text);
  if (s.empty()) throw Error(ErrorCode::Parse, "empty value");
  if (dimension == Dimension::Angle) {
    if (auto v = parse_pi_multiple(s)) return *v;
  }
  double value = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (*begin == '+') ++begin;
  const auto [p, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || !std::isfinite(value))
    throw Error(ErrorCode::Parse, "expected a number, got '" + std::string(s) + "'");
  const std::string_view unit = trim(std::string_view(p, static_cast<std::size_t>(end - p)));
  if (unit.empty()) return value * bare_scale(dimension);
  for (const auto& u : unit_table().at(dimension))
    if (u.name == unit) return value * u.scale;
  throw Error(ErrorCode::Parse, "unit '" + std::string(unit) + "' not valid here");
}

LoadedConfig parse_config_text(std::string_view text) {
  Document doc;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const auto hash = raw.find('#');
    std::string_view line = hash == std::string_view::npos ? raw : raw.substr(0, hash);
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const int indent = static_cast<int>(body.data() - raw.data()) + 1;

    if (body.front() == '[') {
      if (body.back() != ']')
        throw ParseError(line_no, indent, "section header needs a closing ']'");
      section = std::string(trim(body.substr(1, body.size() - 2)));
      if (schema().count(section) == 0)
        throw ParseError(line_no, indent + 1, "unknown section [" + section + "]");
      doc[section];
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, indent, "expected 'key = value'");
    if (section.empty()) throw ParseError(line_no, indent, "key outside of any [section]");
    const std::string key(trim(body.substr(0, eq)));
    const std::string_view value_raw = body.substr(eq + 1);
    const std::string_view value = trim(value_raw);
    if (key.empty()) throw ParseError(line_no, indent, "missing key before '='");
    const int value_col = static_cast<int>(value.data() - raw.data()) + 1;
    if (value.empty()) throw ParseError(line_no, value_col, "missing value for '" + key + "'");
    insert_entry(doc, section, key, Entry{std::string(value), line_no, value_col}, indent);
  }
  return build(doc);
}

LoadedConfig parse_config_json(std::string_view text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Convert the byte offset to line and column.
    int line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(line, col, "invalid JSON");
  }
  if (!root.is_object()) throw ParseError(1, 1, "top-level JSON value must be an object");
  Document doc;
  for (const auto& [section, body] : root.items()) {
    if (schema().count(section) == 0) throw ParseError(1, 1, "unknown section [" + section + "]");
    if (!body.is_object()) throw ParseError(1, 1, "section [" + section + "] must be an object");
    doc[section];
    for (const auto& [key, value] : body.items()) {
      std::string rendered;
      if (value.is_string()) {
        rendered = value.get<std::string>();
      } else if (value.is_boolean()) {
        rendered = value.get<bool>() ? "true" : "false";
      } else if (value.is_number_integer() || value.is_number_unsigned()) {
        rendered = value.dump();
      } else if (value.is_number()) {
        rendered = number_text(value.get<double>());
      } else {
        throw ParseError(1, 1, section + "." + key + ": expected a scalar");
      }
      insert_entry(doc, section, key, Entry{rendered, 1, 1}, 1);
    }
  }
  return build(doc);
}

LoadedConfig parse_config(std::string_view text) {
  const auto body = trim(text);
  if (!body.empty() && body.front() == '{') return parse_config_json(text);
  return parse_config_text(text);
}

LoadedConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path, e);
  }
}

std::string canonical_text(const Scenario& s) {
  std::ostringstream o;
  auto kv = [&](const char* key, const std::string& value) { o << key << " = " << value << "\n"; };
  auto num = [&](const char* key, double v, const char* unit = "") {
    kv(key, number_text(v) + (unit[0] ? std::string(" ") + unit : std::string()));
  };
  o << "[molecule]\n";
  kv("chirality", std::string(to_string(s.molecule.chirality)));
  num("A", s.molecule.A, "rad/s");
  num("B", s.molecule.B, "rad/s");
  num("C", s.molecule.C, "rad/s");
  num("mu_a", s.molecule.mu_a, "C*m");
  num("mu_b", s.molecule.mu_b, "C*m");
  num("mu_c", s.molecule.mu_c, "C*m");
  o << "\n[cavity]\n";
  num("R_m", s.cavity.geometry.R_m, "m");
  kv("q", std::to_string(s.cavity.geometry.q));
  num("f_target", s.cavity.f_q, "Hz");
  num("g0", s.cavity.g0, "rad/s");
  num("kappa", s.cavity.kappa, "rad/s");
  num("w0", s.cavity.w0, "m");
  o << "\n[drive]\n";
  num("lambda", s.drive.lambda);
  if (s.drive.eta) num("eta", *s.drive.eta, "rad/s");
  num("Delta_m", s.drive.Delta_m, "rad/s");
  num("Delta_c", s.drive.Delta_c, "rad/s");
  o << "\n[sample]\n";
  num("N_m", s.sample.N_m);
  num("v", s.sample.v, "m/s");
  if (s.sample.Ybar0) num("Ybar0", *s.sample.Ybar0, "m");
  kv("trapped", s.sample.trapped ? "true" : "false");
  kv("trap_entry", s.sample.trap_entry ? "true" : "false");
  num("trap_time", s.sample.trap_time, "s");
  kv("sigma_z0", std::to_string(s.sample.sigma_z0));
  if (s.sample.L) num("L", *s.sample.L, "m");
  o << "\n[detection]\n";
  num("phi_lo", s.detection.phi_lo, "rad");
  num("N_lo", s.detection.N_lo, "1/s");
  num("M_Y", s.detection.M_Y);
  if (s.detection.t0) num("t0", *s.detection.t0, "s");
  if (s.detection.tf) num("tf", *s.detection.tf, "s");
  o << "\n[integrator]\n";
  num("rtol", s.integrator.rtol);
  num("atol", s.integrator.atol);
  num("max_step", s.integrator.max_step, "s");
  num("initial_step", s.integrator.initial_step, "s");
  kv("max_steps", std::to_string(s.integrator.max_steps));
  num("samples_per_tau", s.samples_per_tau);
  kv("trapped_samples", std::to_string(s.trapped_samples));
  if (s.dissipation) {
    o << "\n[dissipation]\n";
    num("gamma", s.dissipation->gamma, "rad/s");
    num("V_max", s.dissipation->V_max, "rad/s");
  }
  o << "\n[run]\n";
  kv("model", std::string(to_string(s.model)));
  kv("seed", std::to_string(s.seed));
  return o.str();
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace chiralcav
