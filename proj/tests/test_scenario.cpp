#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "relcoll/csv.hpp"
#include "relcoll/errors.hpp"
#include "relcoll/scenario.hpp"

using namespace relcoll;

namespace {

int error_line(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string error_key(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("defaults") {
    const ScenarioConfig c = parse_config("");
    CHECK(c.half_width == 6.0);
    CHECK(c.n == 16);
    CHECK(c.angular.n_mu == 8);
    CHECK(c.angular.n_az == 16);
    CHECK(c.init_kind == InitKind::juttner);
    CHECK(c.scheme == GainScheme::projection);
    CHECK(c.output_path == "-");
    CHECK(c.norms.size() == 3);
  }

  TEST_CASE("full parse with comments and whitespace") {
    const ScenarioConfig c = parse_config(
        "# header\n"
        "grid.half_width = 4.5   # trailing\n"
        "  grid.n=10\n"
        "angular.n_mu = 6\nangular.n_az = 12\n"
        "kernel.c_phi = 0.25\nkernel.c_ang = 2\n"
        "init.kind = two_bump\ninit.beta = 0.5\ninit.shift = 1 -2 0.5\n"
        "time.t_end = 2\ntime.safety = 0.25\ntime.dt_max = 0.05\n"
        "solver.scheme = interpolate\n"
        "output.path = out.csv\n"
        "norms = 2 1, 3 0\n"
        "carleman.n_r = 20\ncarleman.n_psi = 10\n");
    CHECK(c.half_width == 4.5);
    CHECK(c.n == 10);
    CHECK(c.kernel.c_phi == 0.25);
    CHECK(c.init_kind == InitKind::two_bump);
    CHECK(c.shift.y == -2.0);
    CHECK(c.scheme == GainScheme::interpolate);
    CHECK(c.output_path == "out.csv");
    REQUIRE(c.norms.size() == 2);
    CHECK(c.norms[0].k == 1.0);
    const RunOptions o = c.run_options();
    CHECK(o.t_end == 2.0);
    CHECK(o.step.safety == 0.25);
    CHECK(o.step.scheme == GainScheme::interpolate);
    const WeakFormGrid g = c.weak_form_grid();
    CHECK(g.n_r == 20);
    CHECK(g.n_psi == 10);
    CHECK(g.n == 10);
  }

  TEST_CASE("errors carry key and line") {
    CHECK(error_line("grid.n = 8\nbogus = 1\n") == 2);
    CHECK(error_key("grid.n = 8\nbogus = 1\n") == "bogus");
    CHECK(error_line("grid.n = 8\ngrid.n = 9\n") == 2);
    CHECK(error_line("\n\ngrid.n = eight\n") == 3);
    CHECK(error_line("grid.n = 1\n") == 1);
    CHECK(error_line("no equals sign\n") == 1);
    CHECK(error_key("init.kind = plasma\n") == "init.kind");
    CHECK(error_key("solver.scheme = spectral\n") == "solver.scheme");
    CHECK(error_key("init.shift = 1 2\n") == "init.shift");
    CHECK(error_key("norms = 0.5 0\n") == "norms");
    CHECK(error_key("time.safety = 1.5\n") == "time.safety");
    CHECK(error_key("kernel.c_phi = nan\n") == "kernel.c_phi");
    CHECK(error_key("grid.half_width =\n") == "grid.half_width");
    CHECK_THROWS_AS(load_config("/nonexistent/relcoll.cfg"), ConfigError);
  }

  TEST_CASE("initial data") {
    ScenarioConfig c = parse_config("grid.half_width = 3\ngrid.n = 6\n");
    DensityField f = build_initial(c);
    CHECK(f[0] == doctest::Approx(std::exp(-energy(f.node(0)))).epsilon(1e-15));
    c.init_kind = InitKind::box;
    c.box_half_width = 1.0;
    f = build_initial(c);
    CHECK(f[f.index(2, 3, 2)] == 1.0);
    CHECK(f[f.index(0, 3, 3)] == 0.0);
    c.init_kind = InitKind::two_bump;
    f = build_initial(c);
    const Vec3 v = f.node(7);
    CHECK(f[7] == doctest::Approx(std::exp(-energy(v - c.shift)) + std::exp(-energy(v + c.shift)))
                      .epsilon(1e-15));
    CHECK(to_string(InitKind::two_bump) == "two_bump");
  }
}

TEST_SUITE("csv") {
  TEST_CASE("shortest round-trip numbers") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(-2.5e-20) == "-2.5e-20");
    const double x = 1.0 / 3.0;
    CHECK(std::stod(format_number(x)) == x);
  }

  TEST_CASE("header and rows") {
    const std::vector<NormSpec> norms{{1.5, 0.0}, {2.0, 1.0}};
    CHECK(csv_header(norms) ==
          "t,dt,mass,px,py,pz,energy,entropy,min_f,max_f,L_ratio_min,L_ratio_max,lp_1.5_0,lp_2_1");
    DiagnosticsRecord r;
    r.t = 0.5;
    r.mass = 2.0;
    r.norm_specs = norms;
    r.lp_norms = {3.0, 4.25};
    CHECK(csv_row(r) == "0.5,0,2,0,0,0,0,0,0,0,0,0,3,4.25");
    std::ostringstream out;
    CsvWriter w(out, norms);
    w.write(r);
    CHECK(out.str() == csv_header(norms) + "\n" + csv_row(r) + "\n");
  }
}
