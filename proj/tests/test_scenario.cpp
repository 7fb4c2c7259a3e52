#include "nispin/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

using namespace nispin;

namespace {

Scenario scenario(std::string_view text) { return std::get<Scenario>(parse_config(text)); }

// Error message of parse_config, or "" when it succeeds.
std::string config_error(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto end = text.find("\r\n", pos);
    REQUIRE(end != std::string::npos);
    std::vector<std::string> cells;
    std::stringstream line(text.substr(pos, end - pos));
    for (std::string cell; std::getline(line, cell, ',');) cells.push_back(cell);
    out.push_back(cells);
    pos = end + 2;
  }
  return out;
}

constexpr std::string_view kBeam =
    "scenario.preset = rotating_beam\n"
    "frame.omega = 0.2\n"
    "momentum.k = 0.5\n"
    "grid.t_end = 5\n"
    "grid.samples = 6\n";

}  // namespace

TEST_CASE("preset names round-trip") {
  for (const auto& info : preset_catalog()) {
    CHECK(preset_from_string(to_string(info.preset)) == info.preset);
    CHECK_FALSE(info.summary.empty());
  }
  CHECK_FALSE(preset_from_string("spinning_top"));
}

TEST_CASE("rotating beam document") {
  const Scenario s = scenario(kBeam);
  CHECK(s.preset == Preset::rotating_beam);
  CHECK(s.name == "rotating_beam");
  CHECK(s.mass == 1.0);
  CHECK(s.numerics.nodes == 1024);
  CHECK(s.numerics.fd_step == 1e-4);
  CHECK((s.frame().rotation(1.0) - Vec3(0.2, 0, 0)).norm() == 0.0);
  CHECK(s.frame().acceleration(1.0).norm() == 0.0);
  CHECK((s.kinematics().momentum(3.0) - Vec3(0.5, 0, 0)).norm() == 0.0);
  const auto t = s.grid.values();
  REQUIRE(t.size() == 6);
  CHECK(t.front() == 0.0);
  CHECK(t.back() == 5.0);
}

TEST_CASE("document syntax") {
  const Scenario s = scenario(
      "# comment\n"
      "scenario.name = \"my run\"   # trailing comment\n"
      "scenario.preset = custom\n"
      "momentum.k = [0.1, 0.2, 0.3]\n"
      "frame.omega = [0, 0, 0.01]\n"
      "frame.accel = [0.001, 0, 0]\n"
      "grid.times = [0, 0.5, 2]\n"
      "numerics.nodes = 512\n"
      "numerics.richardson = true\n");
  CHECK(s.name == "my run");
  CHECK((s.momentum - Vec3(0.1, 0.2, 0.3)).norm() == 0.0);
  CHECK(s.grid.values() == std::vector<double>{0, 0.5, 2});
  CHECK(s.numerics.nodes == 512);
  CHECK(s.richardson);
}

TEST_CASE("configuration errors carry line and field") {
  CHECK(config_error("").find("missing preset") != std::string::npos);
  CHECK(config_error("# nothing\n\n").find("missing preset") != std::string::npos);
  CHECK(config_error("\nscenario.preset = warp_drive\n") ==
        "line 2: scenario.preset: unknown preset 'warp_drive'");
  CHECK(config_error("scenario.preset = rotating_beam\nframe.omega = 0.1\nbogus.key = 1\n") ==
        "line 3: bogus.key: unknown key");
  CHECK(config_error("scenario.preset = rotating_beam\nframe.omega = 0.1\nframe.omega = 0.2\n")
            .find("line 3: frame.omega: duplicate key") == 0);
  CHECK(config_error("scenario.preset = rotating_beam\njust words\n").find("line 2:") == 0);
  CHECK(config_error("scenario.preset = rotating_beam\nframe.omega = fast\n").find("line 2: frame.omega") == 0);
  CHECK(config_error("scenario.preset = rotating_beam\ngrid.t_end = 5\n").find("frame.omega") !=
        std::string::npos);
  CHECK(config_error("scenario.preset = rotating_beam\nframe.omega = 0.1\n").find("grid.t_end") !=
        std::string::npos);
  CHECK(config_error("scenario.preset = custom\nmomentum.k = [1, 2]\n").find("line 2: momentum.k") == 0);
}

TEST_CASE("cyclotron orbit needs a field or a frequency") {
  constexpr std::string_view base =
      "scenario.preset = cyclotron_orbit\nframe.omega = 0.01\nmomentum.k = 0.5\ngrid.t_end = 10\n";
  CHECK(config_error(base).find("field.B") != std::string::npos);
  CHECK(config_error(std::string(base) + "field.B = 0.3\n").empty());
  const Scenario s = scenario(std::string(base) + "field.B = 0.3\nfield.charge = 2\n");
  CHECK(s.cyclotron_rate() == doctest::Approx(0.6 / std::sqrt(1.25)));
  CHECK(scenario(std::string(base) + "field.omega_cyc = 0.25\n").cyclotron_rate() == 0.25);
}

TEST_CASE("time grids must increase") {
  constexpr std::string_view head = "scenario.preset = rotating_beam\nframe.omega = 0.1\n";
  CHECK(config_error(std::string(head) + "grid.times = [0, 2, 1]\n").find("non-monotone time grid") !=
        std::string::npos);
  CHECK(config_error(std::string(head) + "grid.times = [0, 1, 1]\n").find("line 3: grid.times") == 0);
  CHECK(config_error(std::string(head) + "grid.t_start = 3\ngrid.t_end = 1\ngrid.samples = 4\n")
            .find("non-monotone time grid") != std::string::npos);
}

TEST_CASE("rotating beam rows") {
  const Table t = run(scenario(kBeam));
  CHECK(t.header == std::vector<std::string>{"t", "re_a12", "im_a12", "p_numeric", "p_closed_form", "valid"});
  REQUIRE(t.rows.size() == 6);
  CHECK(t.rows.front()[3] == 0.0);
  const auto& last = t.rows.back();
  CHECK(last[0] == 5.0);
  CHECK(std::abs(last[3] - 0.25) < 1e-6 * 0.25);
  CHECK(last[4] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(last[5] == 1.0);
  CHECK(last[1] == doctest::Approx(0.2 / std::sqrt(1.25)));
  CHECK(last[2] == 0.0);
}

TEST_CASE("every flip preset starts from zero probability") {
  for (std::string_view text :
       {std::string_view(kBeam),
        std::string_view("scenario.preset = helical_packet\nframe.omega = 0.02\nmomentum.k = 0.3\n"
                         "momentum.k3 = 0.4\nworldline.radius = 1\ngrid.t_end = 3\ngrid.samples = 4\n"),
        std::string_view("scenario.preset = cyclotron_orbit\nframe.omega = 0.01\nmomentum.k = 0.5\n"
                         "field.omega_cyc = 0.3\ngrid.t_end = 10\ngrid.samples = 3\n"),
        std::string_view("scenario.preset = custom\nmomentum.k = [0.1, 0.2, 0.3]\n"
                         "frame.omega = [0.01, 0, 0.02]\nframe.accel = [0, 0.01, 0]\ngrid.t_end = 2\n")}) {
    const Table t = run(scenario(text));
    REQUIRE_FALSE(t.rows.empty());
    CHECK(t.rows.front()[0] == 0.0);
    CHECK(t.rows.front()[3] == 0.0);
  }
}

TEST_CASE("custom preset has no closed form") {
  const Table t = run(scenario("scenario.preset = custom\nmomentum.k = [0.1, 0.2, 0.3]\n"
                               "frame.omega = [0.01, 0, 0.02]\nframe.accel = [0, 0, 0]\ngrid.t_end = 2\n"
                               "grid.samples = 2\n"));
  CHECK(std::isnan(t.rows.back()[4]));
}

TEST_CASE("rest-frame divergence rows") {
  const Table t = run(scenario("scenario.preset = rest_frame_divergence\nframe.omega = 0.1\n"
                               "frame.accel = [0, 0.01, 0]\ndivergence.x = 1\n"));
  REQUIRE(t.rows.size() == 1);
  CHECK(t.header[5] == "closed_form_12");
  CHECK(t.rows[0][5] == doctest::Approx(1.0e-3).epsilon(1e-14));
  CHECK(std::abs(t.rows[0][2]) < 1e-8);
  CHECK(std::abs(t.rows[0][3]) < 1e-8);
}

TEST_CASE("CSV output") {
  Table t;
  t.header = {"a", "b"};
  std::ostringstream empty;
  emit_csv(t, empty);
  CHECK(empty.str() == "a,b\r\n");

  t.rows = {{0.1, 1.0 / 3.0}, {-2.5e-300, std::nan("")}, {1e300, 0.0}};
  std::ostringstream out;
  emit_csv(t, out);
  const auto cells = split_csv(out.str());
  REQUIRE(cells.size() == 4);
  CHECK(cells[2][1] == "nan");
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    for (std::size_t c = 0; c < 2; ++c) {
      const double back = std::strtod(cells[r + 1][c].c_str(), nullptr);
      if (std::isnan(t.rows[r][c]))
        CHECK(std::isnan(back));
      else
        CHECK(back == t.rows[r][c]);
    }
  CHECK_THROWS_AS(emit_csv(t, std::string("/nonexistent-dir/x.csv")), std::runtime_error);
}

TEST_CASE("runs are deterministic") {
  const Scenario s = scenario(kBeam);
  std::ostringstream a, b;
  emit_csv(run(s), a);
  emit_csv(run(s), b);
  CHECK(a.str() == b.str());
}

TEST_CASE("sweeps keep the value order") {
  const auto cfg = parse_config(
      "scenario.preset = rotating_beam\nmomentum.k = 0.5\ngrid.t_end = 5\ngrid.samples = 2\n"
      "sweep.parameter = frame.omega\nsweep.values = [0.3, 0.1, 0.2]\n");
  const auto& spec = std::get<SweepSpec>(cfg);
  CHECK(spec.parameter == "frame.omega");
  const Table serial = run_sweep(spec, 1);
  const Table parallel = run_sweep(spec, 3);
  CHECK(serial.header.front() == "frame.omega");
  REQUIRE(serial.rows.size() == 6);
  CHECK(serial.rows == parallel.rows);
  CHECK(serial.rows[0][0] == 0.3);
  CHECK(serial.rows[2][0] == 0.1);
  CHECK(serial.rows[5][0] == 0.2);
  CHECK(serial.rows[5][4] == doctest::Approx(0.25));
  CHECK(config_error("scenario.preset = rotating_beam\nframe.omega = 0.1\ngrid.t_end = 1\n"
                     "sweep.parameter = scenario.preset\nsweep.values = [1]\n")
            .find("line 4: sweep.parameter") == 0);
  CHECK(config_error("scenario.preset = rotating_beam\nframe.omega = 0.1\ngrid.t_end = 1\n"
                     "sweep.values = [1]\n")
            .find("sweep.parameter") != std::string::npos);
}

TEST_CASE("every sweep point is validated up front") {
  CHECK(config_error("scenario.preset = rotating_beam\nframe.omega = 0.1\ngrid.t_end = 5\n"
                     "sweep.parameter = particle.mass\nsweep.values = [1, -1]\n")
            .find("particle.mass") != std::string::npos);
}

TEST_CASE("tensor and precession tables") {
  const Scenario s = scenario(kBeam);
  const Table tensor = spin_current_table(s, 1.0);
  CHECK(tensor.header == std::vector<std::string>{"rho", "mu", "nu", "definitional", "expanded"});
  CHECK(tensor.rows.size() == 24);  // mu < nu only
  const Table spin = precession_table(scenario(std::string(kBeam) + "precession.dt = 0.5\n"));
  CHECK(spin.header == std::vector<std::string>{"t", "s_x", "s_y", "s_z"});
  REQUIRE(spin.rows.size() == 11);
  for (const auto& row : spin.rows)
    CHECK(std::hypot(row[1], row[2], row[3]) == doctest::Approx(0.5).epsilon(1e-6));  // coarse dt
}
