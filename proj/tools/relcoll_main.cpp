#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "relcoll/carleman.hpp"
#include "relcoll/collision_operator.hpp"
#include "relcoll/csv.hpp"
#include "relcoll/diagnostics.hpp"
#include "relcoll/errors.hpp"
#include "relcoll/parallel.hpp"
#include "relcoll/scenario.hpp"
#include "relcoll/solver.hpp"
#include "relcoll/verification.hpp"

namespace {

using namespace relcoll;

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

constexpr double kMaxCv = 0.01;
constexpr double kMaxPairDeviation = 0.02;

int cmd_simulate(const std::string& config_path) {
  const ScenarioConfig cfg = load_config(config_path);
  const DensityField f0 = build_initial(cfg);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (cfg.output_path != "-") {
    file.open(cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::cerr << "error: cannot open output file '" << cfg.output_path << "'\n";
      return kFail;
    }
    out = &file;
  }
  CsvWriter writer(*out, cfg.norms);
  const auto records = run(f0, cfg.kernel, cfg.angular, cfg.run_options(),
                           [&writer](const DiagnosticsRecord& r, const SolverState&) {
                             writer.write(r);
                           });
  const DiagnosticsRecord& first = records.front();
  const DiagnosticsRecord& last = records.back();
  std::cerr << "steps: " << records.size() - 1 << "  t = " << format_number(last.t)
            << "\nmass drift:   " << format_number(std::abs(last.mass - first.mass) / first.mass)
            << "\nenergy drift: "
            << format_number(std::abs(last.energy - first.energy) / first.energy) << '\n';
  return kOk;
}

int cmd_verify_kinematics(std::int64_t samples, std::uint64_t seed) {
  KinematicsEnsembleOptions opts;
  opts.samples = samples;
  opts.seed = seed;
  const KinematicsReport rep = verify_kinematics(opts);
  for (const auto& c : rep.checks()) {
    std::printf("%-22s %-24s tol %-8s %s\n", c.name.c_str(), format_number(c.value).c_str(),
                format_number(c.tolerance).c_str(), c.pass ? "PASS" : "FAIL");
  }
  std::printf("samples %lld  seed %llu  %.2fs\n", static_cast<long long>(rep.samples),
              static_cast<unsigned long long>(seed), rep.seconds);
  const bool ok = rep.passed();
  std::printf("%s\n", ok ? "PASS" : "FAIL");
  return ok ? kOk : kFail;
}

int cmd_verify_carleman(const std::string& config_path) {
  const ScenarioConfig cfg = load_config(config_path);
  const WeakFormGrid grid = cfg.weak_form_grid();
  const auto battery = standard_test_battery(grid.half_width);
  const EquivalenceReport rep = compare_representations(battery, grid, cfg.kernel);
  std::printf("%-20s %-24s %-24s %s\n", "test", "direct", "carleman", "ratio");
  for (std::size_t i = 0; i < rep.names.size(); ++i) {
    std::printf("%-20s %-24s %-24s %s\n", rep.names[i].c_str(),
                format_number(rep.direct[i]).c_str(), format_number(rep.carleman[i]).c_str(),
                format_number(rep.ratio[i]).c_str());
  }
  std::printf("kappa %s\ncoefficient_of_variation %s (limit %s)\nmax_pair_deviation %s (limit %s)\n",
              format_number(rep.kappa).c_str(), format_number(rep.coefficient_of_variation).c_str(),
              format_number(kMaxCv).c_str(), format_number(rep.max_pair_deviation).c_str(),
              format_number(kMaxPairDeviation).c_str());
  const bool ok = rep.coefficient_of_variation <= kMaxCv && rep.max_pair_deviation <= kMaxPairDeviation;
  std::printf("%s\n", ok ? "PASS" : "FAIL");
  return ok ? kOk : kFail;
}

int cmd_eval_q(const std::string& config_path, const std::vector<double>& point) {
  const ScenarioConfig cfg = load_config(config_path);
  const DensityField f = build_initial(cfg);
  const Momentum v(point.at(0), point.at(1), point.at(2));
  const double gain = gain_direct(f, f, cfg.kernel, cfg.angular, v);
  const double loss = loss_L(f, cfg.kernel, cfg.angular, v);
  const double fv = f.interpolate(v.vec());
  std::printf("Q+ %s\nLf %s\nf %s\nQ %s\n", format_number(gain).c_str(),
              format_number(loss).c_str(), format_number(fv).c_str(),
              format_number(gain - fv * loss).c_str());
  return kOk;
}

int cmd_exponents(double p, double eta) {
  const Branch chosen = branch_for(p);
  std::printf("p %s  eta %s\n", format_number(p).c_str(), format_number(eta).c_str());
  std::printf("n %s\ntheta %s\nm %s\n", format_number(exponent_n(p)).c_str(),
              format_number(exponent_theta(p)).c_str(), format_number(weight_m(p, eta)).c_str());
  std::printf("branch %s (convention: low on (1, 6], high on (6, inf))\n",
              chosen == Branch::low ? "low" : "high");
  std::printf("m low branch  %s\n", format_number(weight_m(p, eta, Branch::low)).c_str());
  if (p > 3.0) {
    std::printf("m high branch %s\n", format_number(weight_m(p, eta, Branch::high)).c_str());
  } else {
    std::printf("m high branch undefined for p <= 3\n");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relativistic collision operator toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker thread bound (0 = runtime default)")
      ->check(CLI::NonNegativeNumber);

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "Run the homogeneous solver and write CSV");
  simulate->add_option("config", config_path, "Scenario config file")->required();

  auto* verify = app.add_subcommand("verify", "Invariant suites");
  verify->require_subcommand(1);
  std::int64_t samples = 100000;
  std::uint64_t seed = 7;
  auto* vkin = verify->add_subcommand("kinematics", "Seeded kinematics invariant ensemble");
  vkin->add_option("--samples", samples, "Number of random pairs")->check(CLI::PositiveNumber);
  vkin->add_option("--seed", seed, "RNG seed");
  auto* vcar = verify->add_subcommand("carleman", "Direct vs Carleman weak-form battery");
  vcar->add_option("config", config_path, "Scenario config file")->required();

  std::vector<double> point;
  auto* evalq = app.add_subcommand("eval-q", "Evaluate Q+, Lf and Q at one momentum");
  evalq->add_option("config", config_path, "Scenario config file")->required();
  evalq->add_option("--point", point, "vx vy vz")->expected(3)->required();

  double p = 0.0;
  double eta = 0.0;
  auto* expo = app.add_subcommand("exponents", "Exponents n, theta and weight m");
  expo->add_option("--p", p, "Integrability exponent p > 1")->required();
  expo->add_option("--eta", eta, "Moment exponent eta > 2")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  if (threads > 0) set_threads(threads);

  try {
    if (*simulate) return cmd_simulate(config_path);
    if (*vkin) return cmd_verify_kinematics(samples, seed);
    if (*vcar) return cmd_verify_carleman(config_path);
    if (*evalq) return cmd_eval_q(config_path, point);
    if (*expo) return cmd_exponents(p, eta);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
  std::cerr << app.help();
  return kUsage;
}
