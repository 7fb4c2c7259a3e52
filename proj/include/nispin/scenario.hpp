#pragma once

// Config-driven scenarios: the three spin-flip set-ups, the rest-frame
// divergence probe and a custom constant-field case, plus sweeps and CSV
// output.

#include "nispin/precession.hpp"
#include "nispin/spin_current.hpp"
#include "nispin/transition.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nispin {

enum class Preset { rotating_beam, helical_packet, cyclotron_orbit, rest_frame_divergence, custom };

std::string_view to_string(Preset p);
std::optional<Preset> preset_from_string(std::string_view name);

struct PresetInfo {
  Preset preset;
  std::string_view summary;
  std::string_view required;  // comma separated keys
};
const std::vector<PresetInfo>& preset_catalog();

/// Bad input document. line() is 0 when the problem is not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, int line, const std::string& what);
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

/// Non-finite or otherwise unusable numerical result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TimeGrid {
  double t_start = 0.0;
  double t_end = 0.0;
  int samples = 1;
  std::vector<double> explicit_times;  // overrides the uniform grid when non-empty

  std::vector<double> values() const;
};

struct Scenario {
  std::string name = "scenario";
  Preset preset = Preset::custom;
  double mass = 1.0;

  double k = 0.0;                       // transverse momentum magnitude (presets)
  double k3 = 0.0;                      // helical axial momentum
  Vec3 momentum = Vec3::Zero();         // custom
  double omega = 0.0;                   // preset rotation rate
  Vec3 omega_vec = Vec3::Zero();        // custom
  Vec3 accel = Vec3::Zero();            // custom, rest_frame_divergence
  double radius = 0.0;                  // helical
  double charge = 1.0;                  // cyclotron
  std::optional<double> field_b;        // cyclotron
  std::optional<double> omega_cyc;      // cyclotron
  Vec3 probe = Vec3::Zero();            // rest_frame_divergence field point

  TimeGrid grid;
  PhaseOptions numerics;
  bool richardson = false;

  Vec3 spin0{0.0, 0.0, 0.5};
  double precession_dt = 1e-2;

  /// Cyclotron angular frequency; 0 for other presets.
  double cyclotron_rate() const;
  FrameField frame() const;
  FlipKinematics kinematics() const;
  Worldline worldline() const;
  PrecessionFields precession_fields() const;
  /// Printed closed-form probability at t, when the preset has one.
  std::optional<double> closed_form(double t) const;
};

/// key = value document with line numbers, as read from a config file.
struct ConfigEntry {
  int line = 0;
  std::vector<double> numbers;
  std::string text;
  bool is_array = false;
  bool is_text = false;
};
using ConfigDocument = std::map<std::string, ConfigEntry>;

ConfigDocument parse_document(std::string_view text);
Scenario scenario_from_document(const ConfigDocument& doc);

struct SweepSpec {
  std::string parameter;
  std::vector<double> values;
  ConfigDocument base;

  Scenario scenario_for(std::size_t index) const;
};

std::variant<Scenario, SweepSpec> parse_config(std::string_view text);
std::variant<Scenario, SweepSpec> config_from_document(ConfigDocument doc);

/// Sets a numeric key as if it had been written in the document (used for
/// command-line overrides).
void override_number(ConfigDocument& doc, const std::string& key, double value);

/// Keys that a sweep may vary.
const std::vector<std::string_view>& sweepable_keys();

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Spin-flip presets: t, re_a12, im_a12, p_numeric, p_closed_form, valid.
/// rest_frame_divergence: t, div_spatial_12, div_spatial_13, div_spatial_23,
/// div_full_12, closed_form_12.
Table run(const Scenario& s);

/// Rows of run() for every sweep value, prefixed by a column holding the
/// value. Points run concurrently on up to `threads` workers.
Table run_sweep(const SweepSpec& spec, unsigned threads = 0);

/// Columns rho, mu, nu, definitional, expanded at time t on the worldline.
Table spin_current_table(const Scenario& s, double t);

/// Columns t, s_x, s_y, s_z.
Table precession_table(const Scenario& s);

void emit_csv(const Table& table, std::ostream& out);
/// Throws std::runtime_error on I/O failure.
void emit_csv(const Table& table, const std::string& path);

}  // namespace nispin
