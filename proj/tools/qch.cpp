// qch: consistent-histories calculations from the command line.
//
//   qch scenario <hardy|singlet|ensemble|dragon|brownian|marginals> [flags]
//   qch check <file.json>
//   qch hardy-search
//
// Exit codes: 0 all checks pass, 1 a reported check failed, 2 input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qch/qch.hpp"

namespace {

void emit(const qch::ScenarioReport& report, const std::string& format) {
  if (format == "json")
    std::cout << qch::to_json(report).dump(2) << "\n";
  else
    std::cout << qch::to_text(report);
}

int report_exit(const qch::ScenarioReport& report) { return report.all_pass() ? 0 : 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"consistent-histories engine: frameworks, probabilities, scenarios"};
  app.require_subcommand(1);

  double tol = qch::global_tolerance();
  std::string format = "text";
  app.add_option("--tol", tol, "global tolerance for invariant checks")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));

  CLI::App* scenario = app.add_subcommand("scenario", "run a built-in scenario");
  scenario->fallthrough();
  std::string which;
  scenario->add_option("name", which, "one of hardy|singlet|ensemble|dragon|brownian|marginals")
      ->required();
  double w_theta = 0.0, w_phi = 0.0, v_theta = 0.0, v_phi = 0.0;
  std::uint64_t seed = 0;
  bool random_b_unitary = false;
  double alpha_re = 0.7071067811865476, alpha_im = 0.0;
  double beta_re = 0.7071067811865476, beta_im = 0.0;
  double b_r = 1.0, b_t = 1.0, b_d = 1.0;
  scenario->add_option("--w-theta", w_theta, "polar angle of w (singlet)");
  scenario->add_option("--w-phi", w_phi, "azimuth of w (singlet)");
  scenario->add_option("--v-theta", v_theta, "polar angle of the measured axis v (singlet)");
  scenario->add_option("--v-phi", v_phi, "azimuth of v (singlet)");
  scenario->add_option("--seed", seed, "seed for randomized checks (default 0)");
  scenario->add_flag("--random-b-unitary", random_b_unitary,
                     "apply a seeded random unitary on factor b (singlet)");
  scenario->add_option("--alpha-re", alpha_re, "Re alpha (dragon)");
  scenario->add_option("--alpha-im", alpha_im, "Im alpha (dragon)");
  scenario->add_option("--beta-re", beta_re, "Re beta (dragon)");
  scenario->add_option("--beta-im", beta_im, "Im beta (dragon)");
  scenario->add_option("--r", b_r, "radius (brownian)");
  scenario->add_option("--time", b_t, "elapsed time (brownian)");
  scenario->add_option("--diffusion", b_d, "diffusion constant (brownian)");

  CLI::App* check = app.add_subcommand("check", "evaluate the queries of a scenario file");
  check->fallthrough();
  std::string file;
  check->add_option("file", file, "scenario file (JSON)")->required();

  CLI::App* search = app.add_subcommand("hardy-search",
                                        "regenerate the committed Hardy instance numerically");
  search->fallthrough();
  int coarse = 180;
  search->add_option("--coarse", coarse, "coarse grid points per angle")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  qch::global_tolerance() = tol;

  try {
    if (scenario->parsed()) {
      if (which == "hardy") {
        qch::ScenarioReport r = qch::hardy_scenario(tol);
        emit(r, format);
        return report_exit(r);
      }
      if (which == "singlet") {
        std::optional<qch::Matrix> u_b;
        if (random_b_unitary) u_b = qch::RandomSource(seed).unitary(2);
        qch::ScenarioReport r = qch::singlet_locality_scenario(
            qch::Direction(w_theta, w_phi), qch::Direction(v_theta, v_phi), u_b, tol);
        emit(r, format);
        return report_exit(r);
      }
      if (which == "ensemble") {
        qch::ScenarioReport r = qch::ensemble_ambiguity_scenario(seed, tol);
        emit(r, format);
        return report_exit(r);
      }
      if (which == "dragon") {
        qch::ScenarioReport r = qch::dragon_scenario({alpha_re, alpha_im}, {beta_re, beta_im}, tol);
        emit(r, format);
        return report_exit(r);
      }
      if (which == "brownian") {
        qch::ScenarioReport r = qch::brownian_scenario(b_r, b_t, b_d);
        emit(r, format);
        return report_exit(r);
      }
      if (which == "marginals") {
        qch::ScenarioReport r = qch::marginal_ambiguity_scenario();
        emit(r, format);
        return report_exit(r);
      }
      std::cerr << "error: unknown scenario '" << which << "'\n";
      return 2;
    }

    if (check->parsed()) {
      std::ifstream in(file);
      if (!in) {
        std::cerr << "error: cannot open '" << file << "'\n";
        return 2;
      }
      std::ostringstream buf;
      buf << in.rdbuf();
      qch::ScenarioFile sf = qch::parse_scenario_file(buf.str());
      qch::ScenarioReport r = qch::run_scenario_file(sf, tol);
      r.name = "check " + file;
      emit(r, format);
      return report_exit(r);
    }

    if (search->parsed()) {
      qch::HardySearchResult found = qch::hardy_search(coarse);
      qch::HardyInstance shipped = qch::shipped_hardy_instance();
      qch::ScenarioReport r;
      r.name = "hardy-search";
      r.lines.push_back({"max Pr(A,~D) found", found.max_joint, qch::Bound::at_least(0.05)});
      r.lines.push_back({"alpha (basis angle of |a>)", found.alpha, qch::Bound::none()});
      r.lines.push_back({"delta (basis angle of |d>)", found.delta, qch::Bound::none()});
      double joint_shipped = qch::joint_probability(shipped.A(), qch::negation(shipped.D()),
                                                    shipped.state, tol);
      r.lines.push_back({"committed instance Pr(A,~D)", joint_shipped, qch::Bound::none()});
      r.lines.push_back({"|found - committed|", std::abs(found.max_joint - joint_shipped),
                         qch::Bound::at_most(1e-6)});
      r.matrices.emplace_back("found state", found.instance.state.amps);
      emit(r, format);
      return report_exit(r);
    }
  } catch (const qch::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
