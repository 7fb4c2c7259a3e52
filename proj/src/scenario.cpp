#include "nispin/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

namespace nispin {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> to_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  const std::string buf(s);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || errno == ERANGE) return std::nullopt;
  return v;
}

enum class Kind { number, vector, number_or_vector, array, text, flag };

const std::map<std::string, Kind, std::less<>>& known_keys() {
  static const std::map<std::string, Kind, std::less<>> keys{
      {"scenario.name", Kind::text},        {"scenario.preset", Kind::text},
      {"particle.mass", Kind::number},      {"momentum.k", Kind::number_or_vector},
      {"momentum.k3", Kind::number},        {"frame.omega", Kind::number_or_vector},
      {"frame.accel", Kind::vector},        {"worldline.radius", Kind::number},
      {"field.B", Kind::number},            {"field.charge", Kind::number},
      {"field.omega_cyc", Kind::number},    {"divergence.x", Kind::number_or_vector},
      {"grid.t_start", Kind::number},       {"grid.t_end", Kind::number},
      {"grid.samples", Kind::number},       {"grid.times", Kind::array},
      {"numerics.nodes", Kind::number},     {"numerics.fd_step", Kind::number},
      {"numerics.richardson", Kind::flag},  {"spin.s0", Kind::vector},
      {"precession.dt", Kind::number},      {"sweep.parameter", Kind::text},
      {"sweep.values", Kind::array},
  };
  return keys;
}

class Reader {
 public:
  explicit Reader(const ConfigDocument& doc) : doc_(doc) {}

  bool has(const std::string& key) const { return doc_.count(key) != 0; }
  int line(const std::string& key) const {
    const auto it = doc_.find(key);
    return it == doc_.end() ? 0 : it->second.line;
  }

  std::optional<double> number(const std::string& key) const {
    const auto it = doc_.find(key);
    if (it == doc_.end()) return std::nullopt;
    const ConfigEntry& e = it->second;
    if (e.is_text || e.is_array || e.numbers.size() != 1)
      throw ConfigError(key, e.line, "expected a number");
    return e.numbers[0];
  }

  std::optional<Vec3> vector(const std::string& key) const {
    const auto it = doc_.find(key);
    if (it == doc_.end()) return std::nullopt;
    const ConfigEntry& e = it->second;
    if (e.is_text || !e.is_array || e.numbers.size() != 3)
      throw ConfigError(key, e.line, "expected a 3-vector [x, y, z]");
    return Vec3(e.numbers[0], e.numbers[1], e.numbers[2]);
  }

  bool is_vector(const std::string& key) const {
    const auto it = doc_.find(key);
    return it != doc_.end() && it->second.is_array;
  }

  std::optional<std::string> text(const std::string& key) const {
    const auto it = doc_.find(key);
    if (it == doc_.end()) return std::nullopt;
    if (!it->second.is_text) throw ConfigError(key, it->second.line, "expected text");
    return it->second.text;
  }

  double require_number(const std::string& key, std::string_view preset) const {
    if (!has(key)) missing(key, preset);
    return *number(key);
  }

  Vec3 require_vector(const std::string& key, std::string_view preset) const {
    if (!has(key)) missing(key, preset);
    return *vector(key);
  }

  [[noreturn]] void missing(const std::string& key, std::string_view preset) const {
    throw ConfigError(key, 0, "missing required field '" + key + "' for preset " +
                                  std::string(preset));
  }

 private:
  const ConfigDocument& doc_;
};

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericalError(std::string("non-finite ") + what);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(Preset p) {
  switch (p) {
    case Preset::rotating_beam: return "rotating_beam";
    case Preset::helical_packet: return "helical_packet";
    case Preset::cyclotron_orbit: return "cyclotron_orbit";
    case Preset::rest_frame_divergence: return "rest_frame_divergence";
    case Preset::custom: return "custom";
  }
  return "unknown";
}

std::optional<Preset> preset_from_string(std::string_view name) {
  for (const auto& info : preset_catalog())
    if (to_string(info.preset) == name) return info.preset;
  return std::nullopt;
}

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog{
      {Preset::rotating_beam, "beam along x in a frame rotating about x; P = (Omega t / 2)^2",
       "frame.omega, grid.t_end"},
      {Preset::helical_packet,
       "packet on a helix about z, Omega along z, centripetal a = -Omega^2 (x, y, 0)",
       "frame.omega, momentum.k, momentum.k3, worldline.radius, grid.t_end"},
      {Preset::cyclotron_orbit,
       "circular orbit in z = 0 at the cyclotron frequency, Omega along x",
       "frame.omega, momentum.k, field.B | field.omega_cyc, grid.t_end"},
      {Preset::rest_frame_divergence,
       "spin-current divergence for a particle at rest, Omega along z",
       "frame.omega, frame.accel, divergence.x"},
      {Preset::custom, "constant a and Omega, constant momentum",
       "momentum.k (vector), frame.omega (vector), frame.accel, grid.t_end"},
  };
  return catalog;
}

ConfigError::ConfigError(const std::string& field, int line, const std::string& what)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (field.empty() ? what : field + ": " + what)),
      field_(field),
      line_(line) {}

std::vector<double> TimeGrid::values() const {
  if (!explicit_times.empty()) return explicit_times;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(samples));
  if (samples == 1) {
    out.push_back(t_start);
    return out;
  }
  for (int i = 0; i < samples; ++i)
    out.push_back(i + 1 == samples ? t_end
                                   : t_start + (t_end - t_start) * i / (samples - 1));
  return out;
}

double Scenario::cyclotron_rate() const {
  if (preset != Preset::cyclotron_orbit) return 0.0;
  if (omega_cyc) return *omega_cyc;
  return cyclotron_frequency(charge, field_b.value_or(0.0), k, mass);
}

FrameField Scenario::frame() const {
  switch (preset) {
    case Preset::rotating_beam:
      return FrameField::constant(Vec3::Zero(), Vec3(omega, 0, 0));
    case Preset::helical_packet: {
      const double w = omega, r = radius;
      VectorSampler a{[w, r](double t) {
                        return Vec3(-w * w * r * std::sin(w * t), w * w * r * std::cos(w * t), 0);
                      },
                      [w, r](double t) {
                        return Vec3(-w * w * w * r * std::cos(w * t),
                                    -w * w * w * r * std::sin(w * t), 0);
                      }};
      return FrameField(a, VectorSampler::constant(Vec3(0, 0, w)));
    }
    case Preset::cyclotron_orbit: {
      const double w = omega, wc = cyclotron_rate();
      const double e = std::sqrt(k * k + mass * mass);
      const double r = wc != 0.0 ? k / (e * wc) : 0.0;
      VectorSampler a{[w, wc, r](double t) { return Vec3(-w * w * r * std::sin(wc * t), 0, 0); },
                      [w, wc, r](double t) {
                        return Vec3(-w * w * r * wc * std::cos(wc * t), 0, 0);
                      }};
      return FrameField(a, VectorSampler::constant(Vec3(omega, 0, 0)));
    }
    case Preset::rest_frame_divergence:
      return FrameField::constant(accel, Vec3(0, 0, omega));
    case Preset::custom:
      return FrameField::constant(accel, omega_vec);
  }
  return FrameField::inertial();
}

FlipKinematics Scenario::kinematics() const {
  FlipKinematics kin;
  kin.mass = mass;
  kin.frame = frame();
  switch (preset) {
    case Preset::rotating_beam: {
      const double kk = k;
      kin.momentum = [kk](double) { return Vec3(kk, 0, 0); };
      break;
    }
    case Preset::helical_packet: {
      const double kk = k, kz = k3, w = omega;
      kin.momentum = [kk, kz, w](double t) {
        return Vec3(kk * std::cos(w * t), kk * std::sin(w * t), kz);
      };
      break;
    }
    case Preset::cyclotron_orbit: {
      const double kk = k, wc = cyclotron_rate();
      kin.momentum = [kk, wc](double t) {
        return Vec3(kk * std::cos(wc * t), kk * std::sin(wc * t), 0);
      };
      break;
    }
    case Preset::rest_frame_divergence:
      kin.momentum = [](double) { return Vec3::Zero().eval(); };
      break;
    case Preset::custom: {
      const Vec3 p = momentum;
      kin.momentum = [p](double) { return p; };
      break;
    }
  }
  return kin;
}

Worldline Scenario::worldline() const {
  switch (preset) {
    case Preset::helical_packet: {
      const double e = std::sqrt(k * k + k3 * k3 + mass * mass);
      return Worldline::helical(Vec3::Zero(), radius, omega, k3 / e);
    }
    case Preset::cyclotron_orbit: {
      const double wc = cyclotron_rate();
      const double e = std::sqrt(k * k + mass * mass);
      return Worldline::circular(Vec3::Zero(), wc != 0.0 ? k / (e * wc) : 0.0, wc);
    }
    case Preset::rest_frame_divergence:
      return Worldline::straight({0.0, probe}, Vec3::Zero());
    default: {
      const FourMomentum p(mass, kinematics().momentum(0.0));
      return Worldline::straight({}, p.spatial() / p.energy());
    }
  }
}

PrecessionFields Scenario::precession_fields() const {
  const FlipKinematics kin = kinematics();
  const double m = mass;
  PrecessionFields f;
  f.omega = [fr = kin.frame](double t) { return fr.rotation(t); };
  f.acceleration = [fr = kin.frame](double t) { return fr.acceleration(t); };
  f.velocity = [mom = kin.momentum, m](double t) {
    const FourMomentum p(m, mom(t));
    return Vec3(p.spatial() / p.energy());
  };
  return f;
}

std::optional<double> Scenario::closed_form(double t) const {
  switch (preset) {
    case Preset::rotating_beam: return p_rotating_beam(omega, t).p;
    case Preset::helical_packet: return p_helical(k, k3, omega, radius, t, mass).p;
    case Preset::cyclotron_orbit: return p_cyclotron(k, omega, cyclotron_rate(), t, mass).p;
    default: return std::nullopt;
  }
}

ConfigDocument parse_document(std::string_view text) {
  ConfigDocument doc;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("", line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("", line_no, "empty key");

    const auto known = known_keys().find(key);
    if (known == known_keys().end()) throw ConfigError(key, line_no, "unknown key");
    if (doc.count(key)) throw ConfigError(key, line_no, "duplicate key");

    ConfigEntry e;
    e.line = line_no;
    if (!value.empty() && value.front() == '[') {
      if (value.back() != ']') throw ConfigError(key, line_no, "unterminated array");
      e.is_array = true;
      std::string_view body = trim(value.substr(1, value.size() - 2));
      while (!body.empty()) {
        const auto comma = body.find(',');
        const auto item = trim(body.substr(0, comma));
        const auto v = to_number(item);
        if (!v) throw ConfigError(key, line_no, "bad number '" + std::string(item) + "'");
        e.numbers.push_back(*v);
        if (comma == std::string_view::npos) break;
        body = body.substr(comma + 1);
        if (trim(body).empty()) throw ConfigError(key, line_no, "trailing comma");
      }
    } else if (const auto v = to_number(value)) {
      e.numbers.push_back(*v);
    } else {
      std::string_view s = value;
      if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
      if (s.empty()) throw ConfigError(key, line_no, "empty value");
      e.is_text = true;
      e.text = std::string(s);
    }

    switch (known->second) {
      case Kind::number:
        if (e.is_text || e.is_array) throw ConfigError(key, line_no, "expected a number");
        break;
      case Kind::vector:
        if (!e.is_array || e.numbers.size() != 3)
          throw ConfigError(key, line_no, "expected a 3-vector [x, y, z]");
        break;
      case Kind::number_or_vector:
        if (e.is_text || (e.is_array && e.numbers.size() != 3))
          throw ConfigError(key, line_no, "expected a number or a 3-vector");
        break;
      case Kind::array:
        if (!e.is_array) throw ConfigError(key, line_no, "expected an array");
        break;
      case Kind::text:
        if (!e.is_text) throw ConfigError(key, line_no, "expected text");
        break;
      case Kind::flag:
        if (!e.is_text || (e.text != "true" && e.text != "false"))
          throw ConfigError(key, line_no, "expected true or false");
        break;
    }
    doc.emplace(key, std::move(e));
  }
  return doc;
}

Scenario scenario_from_document(const ConfigDocument& doc) {
  const Reader r(doc);
  const auto preset_name = r.text("scenario.preset");
  if (!preset_name) throw ConfigError("scenario.preset", 0, "missing preset");
  const auto preset = preset_from_string(*preset_name);
  if (!preset)
    throw ConfigError("scenario.preset", r.line("scenario.preset"),
                      "unknown preset '" + *preset_name + "'");

  Scenario s;
  s.preset = *preset;
  s.name = r.text("scenario.name").value_or(std::string(to_string(s.preset)));
  const std::string_view pname = to_string(s.preset);

  s.mass = r.number("particle.mass").value_or(1.0);
  if (!(s.mass > 0.0)) throw ConfigError("particle.mass", r.line("particle.mass"), "must be positive");

  const auto scalar_only = [&](const std::string& key) {
    if (r.is_vector(key))
      throw ConfigError(key, r.line(key), "preset " + std::string(pname) + " takes a scalar");
  };
  const auto vector_only = [&](const std::string& key) {
    if (r.has(key) && !r.is_vector(key))
      throw ConfigError(key, r.line(key), "preset " + std::string(pname) + " takes a 3-vector");
  };

  switch (s.preset) {
    case Preset::rotating_beam:
      scalar_only("frame.omega");
      scalar_only("momentum.k");
      s.omega = r.require_number("frame.omega", pname);
      s.k = r.number("momentum.k").value_or(0.0);
      break;
    case Preset::helical_packet:
      scalar_only("frame.omega");
      scalar_only("momentum.k");
      s.omega = r.require_number("frame.omega", pname);
      s.k = r.require_number("momentum.k", pname);
      s.k3 = r.require_number("momentum.k3", pname);
      s.radius = r.require_number("worldline.radius", pname);
      if (s.radius < 0.0)
        throw ConfigError("worldline.radius", r.line("worldline.radius"), "must be non-negative");
      break;
    case Preset::cyclotron_orbit:
      scalar_only("frame.omega");
      scalar_only("momentum.k");
      s.omega = r.require_number("frame.omega", pname);
      s.k = r.require_number("momentum.k", pname);
      s.charge = r.number("field.charge").value_or(1.0);
      s.field_b = r.number("field.B");
      s.omega_cyc = r.number("field.omega_cyc");
      if (!s.field_b && !s.omega_cyc)
        throw ConfigError("field.B", 0,
                          "preset cyclotron_orbit requires field.B or field.omega_cyc");
      if (s.field_b && s.omega_cyc)
        throw ConfigError("field.omega_cyc", r.line("field.omega_cyc"),
                          "give either field.B or field.omega_cyc, not both");
      break;
    case Preset::rest_frame_divergence: {
      scalar_only("frame.omega");
      s.omega = r.require_number("frame.omega", pname);
      s.accel = r.require_vector("frame.accel", pname);
      if (!r.has("divergence.x")) r.missing("divergence.x", pname);
      if (r.is_vector("divergence.x"))
        s.probe = *r.vector("divergence.x");
      else
        s.probe = Vec3(*r.number("divergence.x"), 0, 0);
      break;
    }
    case Preset::custom:
      vector_only("momentum.k");
      vector_only("frame.omega");
      s.momentum = r.require_vector("momentum.k", pname);
      s.omega_vec = r.require_vector("frame.omega", pname);
      s.accel = r.require_vector("frame.accel", pname);
      break;
  }
  if (s.preset != Preset::custom && s.preset != Preset::rest_frame_divergence &&
      r.has("frame.accel"))
    throw ConfigError("frame.accel", r.line("frame.accel"),
                      "preset " + std::string(pname) + " derives the acceleration");

  // Time grid.
  TimeGrid& g = s.grid;
  if (r.has("grid.times")) {
    if (r.has("grid.t_start") || r.has("grid.t_end") || r.has("grid.samples"))
      throw ConfigError("grid.times", r.line("grid.times"),
                        "grid.times excludes grid.t_start, grid.t_end and grid.samples");
    g.explicit_times = doc.at("grid.times").numbers;
    if (g.explicit_times.empty())
      throw ConfigError("grid.times", r.line("grid.times"), "empty time grid");
    for (std::size_t i = 1; i < g.explicit_times.size(); ++i)
      if (!(g.explicit_times[i] > g.explicit_times[i - 1]))
        throw ConfigError("grid.times", r.line("grid.times"),
                          "non-monotone time grid at index " + std::to_string(i));
    if (g.explicit_times.front() < 0.0)
      throw ConfigError("grid.times", r.line("grid.times"), "times must be non-negative");
  } else {
    g.t_start = r.number("grid.t_start").value_or(0.0);
    if (s.preset == Preset::rest_frame_divergence) {
      g.t_end = r.number("grid.t_end").value_or(g.t_start);
    } else {
      if (!r.has("grid.t_end")) r.missing("grid.t_end", pname);
      g.t_end = *r.number("grid.t_end");
    }
    const double samples = r.number("grid.samples").value_or(g.t_end > g.t_start ? 101 : 1);
    if (samples < 1 || samples != std::floor(samples) || samples > 1e7)
      throw ConfigError("grid.samples", r.line("grid.samples"), "must be a positive integer");
    g.samples = static_cast<int>(samples);
    if (g.t_start < 0.0)
      throw ConfigError("grid.t_start", r.line("grid.t_start"), "must be non-negative");
    if (g.samples > 1 && !(g.t_end > g.t_start))
      throw ConfigError("grid.t_end", r.line("grid.t_end"),
                        "non-monotone time grid: t_end must exceed t_start");
    if (g.samples == 1 && g.t_end != g.t_start && r.has("grid.samples"))
      throw ConfigError("grid.samples", r.line("grid.samples"),
                        "a single sample needs t_end equal to t_start");
  }

  // Numerics.
  const double nodes = r.number("numerics.nodes").value_or(1024);
  if (nodes < 1 || nodes != std::floor(nodes) || nodes > 1e8)
    throw ConfigError("numerics.nodes", r.line("numerics.nodes"), "must be a positive integer");
  s.numerics.nodes = static_cast<int>(nodes);
  s.numerics.fd_step = r.number("numerics.fd_step").value_or(1e-4 / s.mass);
  if (!(s.numerics.fd_step > 0.0))
    throw ConfigError("numerics.fd_step", r.line("numerics.fd_step"), "must be positive");
  s.richardson = r.text("numerics.richardson").value_or("false") == "true";

  s.spin0 = r.vector("spin.s0").value_or(s.spin0);
  s.precession_dt = r.number("precession.dt").value_or(s.precession_dt);
  if (!(s.precession_dt > 0.0))
    throw ConfigError("precession.dt", r.line("precession.dt"), "must be positive");
  return s;
}

const std::vector<std::string_view>& sweepable_keys() {
  static const std::vector<std::string_view> keys{
      "particle.mass",   "momentum.k",      "momentum.k3",   "frame.omega",
      "worldline.radius", "field.B",        "field.charge",  "field.omega_cyc",
      "divergence.x",    "grid.t_end",      "numerics.nodes", "numerics.fd_step",
  };
  return keys;
}

Scenario SweepSpec::scenario_for(std::size_t index) const {
  ConfigDocument doc = base;
  override_number(doc, parameter, values.at(index));
  return scenario_from_document(doc);
}

std::variant<Scenario, SweepSpec> parse_config(std::string_view text) {
  return config_from_document(parse_document(text));
}

void override_number(ConfigDocument& doc, const std::string& key, double value) {
  ConfigEntry& e = doc[key];
  e.is_array = false;
  e.is_text = false;
  e.numbers = {value};
}

std::variant<Scenario, SweepSpec> config_from_document(ConfigDocument doc) {
  const bool has_param = doc.count("sweep.parameter") != 0;
  const bool has_values = doc.count("sweep.values") != 0;
  if (!has_param && !has_values) return scenario_from_document(doc);
  if (!has_param) throw ConfigError("sweep.parameter", 0, "missing required field 'sweep.parameter'");
  if (!has_values) throw ConfigError("sweep.values", 0, "missing required field 'sweep.values'");

  SweepSpec spec;
  const ConfigEntry& p = doc.at("sweep.parameter");
  spec.parameter = p.text;
  const auto& keys = sweepable_keys();
  if (std::find(keys.begin(), keys.end(), spec.parameter) == keys.end())
    throw ConfigError("sweep.parameter", p.line,
                      "'" + spec.parameter + "' is not a sweepable scalar field");
  spec.values = doc.at("sweep.values").numbers;
  if (spec.values.empty())
    throw ConfigError("sweep.values", doc.at("sweep.values").line, "empty sweep");
  doc.erase("sweep.parameter");
  doc.erase("sweep.values");
  spec.base = std::move(doc);
  // Validate every point up front so errors surface before any work starts.
  for (std::size_t i = 0; i < spec.values.size(); ++i) spec.scenario_for(i);
  return spec;
}

Table run(const Scenario& s) {
  Table table;
  const std::vector<double> times = s.grid.values();

  if (s.preset == Preset::rest_frame_divergence) {
    table.header = {"t",           "div_spatial_12", "div_spatial_13",
                    "div_spatial_23", "div_full_12", "closed_form_12"};
    const DiracState state = DiracState::along_momentum(
        FourMomentum::at_rest(s.mass), SpinLabel::up, s.frame(), {0.0, s.probe}, s.numerics);
    const double closed = divergence_rest_frame_closed(s.omega, s.accel, s.probe, s.mass, s.mass);
    for (double t : times) {
      const SpacetimePoint x{t, s.probe};
      const auto parts =
          s.richardson ? divergence_terms_richardson(state, x) : divergence_terms_fd(state, x);
      const Eigen::Matrix4d spatial = parts[1] + parts[2] + parts[3];
      const Eigen::Matrix4d full = spatial + parts[0];
      const std::vector<double> row{t, spatial(1, 2), spatial(1, 3), spatial(2, 3), full(1, 2),
                                    closed};
      for (double v : row) check_finite(v, "spin-current divergence");
      table.rows.push_back(row);
    }
    return table;
  }

  table.header = {"t", "re_a12", "im_a12", "p_numeric", "p_closed_form", "valid"};
  const FlipKinematics kin = s.kinematics();
  for (double t : times) {
    const TransitionResult tr = transition_probability(kin, t, s.numerics.nodes);
    const AmplitudeSample a = amplitude_sample(kin, t);
    check_finite(tr.p, "transition probability");
    check_finite(a.a12.real(), "amplitude");
    check_finite(a.a12.imag(), "amplitude");
    table.rows.push_back({t, a.a12.real(), a.a12.imag(), tr.p, s.closed_form(t).value_or(kNaN),
                          tr.valid ? 1.0 : 0.0});
  }
  return table;
}

Table run_sweep(const SweepSpec& spec, unsigned threads) {
  const std::size_t n = spec.values.size();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

  std::vector<Table> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = run(spec.scenario_for(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Table out;
  out.header.push_back(spec.parameter);
  out.header.insert(out.header.end(), results.front().header.begin(),
                    results.front().header.end());
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& row : results[i].rows) {
      std::vector<double> r{spec.values[i]};
      r.insert(r.end(), row.begin(), row.end());
      out.rows.push_back(std::move(r));
    }
  return out;
}

Table spin_current_table(const Scenario& s, double t) {
  const FlipKinematics kin = s.kinematics();
  const FourMomentum k(s.mass, kin.momentum(0.0));
  const SpacetimePoint start =
      s.preset == Preset::rest_frame_divergence ? SpacetimePoint{0.0, s.probe} : SpacetimePoint{};
  const DiracState state =
      DiracState::along_momentum(k, SpinLabel::up, s.frame(), start, s.numerics);
  const FirstOrderSolution psi(state);
  const SpacetimePoint x = state.worldline.point(t);
  const Rank3Tensor def = spin_current_definitional(psi, x);
  const Rank3Tensor exp = spin_current_expanded(k, SpinLabel::up, state.frame, psi.phases(), x);

  Table table;
  table.header = {"rho", "mu", "nu", "definitional", "expanded"};
  for (int rho = 0; rho < 4; ++rho)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = mu + 1; nu < 4; ++nu) {
        check_finite(def(rho, mu, nu), "spin current");
        table.rows.push_back({double(rho), double(mu), double(nu), def(rho, mu, nu),
                              exp(rho, mu, nu)});
      }
  return table;
}

Table precession_table(const Scenario& s) {
  const double t_end = s.grid.values().back();
  const auto traj = integrate_precession(s.spin0, s.precession_fields(), t_end, s.precession_dt);
  Table table;
  table.header = {"t", "s_x", "s_y", "s_z"};
  for (const auto& p : traj) {
    check_finite(p.s.norm(), "spin vector");
    table.rows.push_back({p.t, p.s.x(), p.s.y(), p.s.z()});
  }
  return table;
}

void emit_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out << (i ? "," : "") << table.header[i];
  out << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << "\r\n";
  }
}

void emit_csv(const Table& table, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  emit_csv(table, f);
  f.flush();
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace nispin
