#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "dmv/config.hpp"
#include "dmv/io.hpp"
#include "dmv/relenergy.hpp"
#include "dmv/solver.hpp"
#include "dmv/studies.hpp"
#include "dmv/uniqueness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

void write_json(const std::string& dir, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / name);
  if (!out) throw std::runtime_error("cannot write " + name);
  out << text << '\n';
}

std::string certificate_json(const dmv::CoercivityCertificate& c) {
  nlohmann::ordered_json j;
  j["passed"] = c.passed;
  j["c1"] = c.c1;
  j["c2"] = c.c2;
  j["c3"] = c.c3;
  j["c4"] = c.c4;
  j["level"] = c.level;
  j["samples"] = c.samples;
  j["min_ratio_at"] = {{"set", c.min_set},
                       {"rho_t", c.min_rho_t},
                       {"theta_t", c.min_theta_t},
                       {"rho", c.min_rho},
                       {"theta", c.min_theta}};
  j["fresh_checked"] = c.fresh_checked;
  j["fresh_violations"] = c.fresh_violations;
  if (c.fresh_violations > 0)
    j["first_violation"] = {{"rho_t", c.viol_rho_t},
                            {"theta_t", c.viol_theta_t},
                            {"rho", c.viol_rho},
                            {"theta", c.viol_theta},
                            {"ratio", c.viol_ratio}};
  j["params"] = {{"gamma", c.params.gamma}, {"a", c.params.a}, {"c_star", c.params.c_star}};
  j["bounds"] = {{"rho_lo", c.box.rho_lo}, {"rho_hi", c.box.rho_hi}, {"theta_lo", c.box.theta_lo},
                 {"theta_hi", c.box.theta_hi}};
  j["message"] = c.message;
  return j.dump(2);
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* t = std::getenv("DMV_THREADS")) {
    const int n = std::atoi(t);
    if (n < 1) {
      std::cerr << "DMV_THREADS must be a positive integer\n";
      return kUsage;
    }
    omp_set_num_threads(n);
  }

  CLI::App app{"Compressible Navier-Stokes solver with measure-valued diagnostics"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "out";

  auto* sim = app.add_subcommand("simulate", "Run a configuration and write artifacts");
  sim->add_option("--config", config_path, "Config file")->required();
  sim->add_option("--out", out_dir, "Output directory");

  dmv::FluidParams lp;
  dmv::ReferenceBox box{0.5, 2.0, 0.5, 2.0};
  dmv::CoercivitySampling sampling;
  auto* lemma = app.add_subcommand("verify-lemma", "Certify coercivity of the relative pressure potential");
  lemma->add_option("--gamma", lp.gamma);
  lemma->add_option("--a", lp.a);
  lemma->add_option("--c-star", lp.c_star);
  lemma->add_option("--rho-lo", box.rho_lo);
  lemma->add_option("--rho-hi", box.rho_hi);
  lemma->add_option("--theta-lo", box.theta_lo);
  lemma->add_option("--theta-hi", box.theta_hi);
  lemma->add_option("--samples", sampling.fresh, "Fresh random checks")->check(CLI::PositiveNumber);
  lemma->add_option("--out", out_dir, "Output directory");

  auto* rei = app.add_subcommand("rei-check", "Relative energy inequality against the reference solution");
  rei->add_option("--config", config_path, "Config file")->required();
  rei->add_option("--out", out_dir, "Output directory");

  std::vector<double> eps{1e-2, 5e-3, 2.5e-3};
  auto* uniq = app.add_subcommand("uniqueness-study", "Gronwall envelope of eps-perturbed runs");
  uniq->add_option("--config", config_path, "Config file")->required();
  uniq->add_option("--eps", eps, "Perturbation amplitudes")->delimiter(',');
  uniq->add_option("--out", out_dir, "Output directory");

  std::vector<int> levels{32, 64, 128};
  auto* conv = app.add_subcommand("convergence-study", "Self-convergence orders on nested grids");
  conv->add_option("--config", config_path, "Config file")->required();
  conv->add_option("--levels", levels, "Grid sizes")->delimiter(',');
  conv->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sim) {
      const dmv::SolverConfig c = dmv::load_config(config_path);
      const auto r = dmv::simulate(c, out_dir);
      std::cout << "simulate: " << r.trajectory.steps << " steps to t = " << dmv::format_number(r.trajectory.times.back())
                << ", artifacts in " << out_dir << '\n';
      return kOk;
    }
    if (*lemma) {
      lp.validate();
      const auto cert = dmv::verify_coercivity(lp, box, sampling);
      write_json(out_dir, "certificate.json", certificate_json(cert));
      std::cout << "verify-lemma: c4 = " << dmv::format_number(cert.c4) << " (c1 = " << dmv::format_number(cert.c1)
                << ", c2 = " << dmv::format_number(cert.c2) << ", c3 = " << dmv::format_number(cert.c3) << "), "
                << cert.fresh_checked << " fresh samples, " << cert.fresh_violations << " violations\n";
      if (!cert.passed) {
        std::cerr << "verify-lemma failed: " << cert.message;
        if (cert.fresh_violations > 0)
          std::cerr << " at rho~ = " << dmv::format_number(cert.viol_rho_t)
                    << ", theta~ = " << dmv::format_number(cert.viol_theta_t)
                    << ", rho = " << dmv::format_number(cert.viol_rho)
                    << ", theta = " << dmv::format_number(cert.viol_theta);
        else
          std::cerr << " (minimum at rho~ = " << dmv::format_number(cert.min_rho_t)
                    << ", theta~ = " << dmv::format_number(cert.min_theta_t) << ")";
        std::cerr << '\n';
        return kFailed;
      }
      return kOk;
    }
    if (*rei) {
      const dmv::SolverConfig c = dmv::load_config(config_path);
      const auto chk = dmv::rei_check(c, out_dir);
      std::cout << "rei-check: worst margin " << dmv::format_number(chk.worst_margin) << " (slack "
                << dmv::format_number(chk.slack) << "), max |T3..T6| " << dmv::format_number(chk.bracket_max) << '\n';
      return chk.ok ? kOk : kFailed;
    }
    if (*uniq) {
      const dmv::SolverConfig c = dmv::load_config(config_path);
      const auto strong = dmv::reference_solution(c);
      const auto rep = dmv::uniqueness_experiment(c, eps, *strong);
      write_json(out_dir, "uniqueness.json", dmv::uniqueness_report_json(rep));
      for (const auto& r : rep.runs)
        std::cout << "eps " << dmv::format_number(r.eps) << ": E0 " << dmv::format_number(r.E0) << ", C "
                  << dmv::format_number(r.C) << ", envelope ratio " << dmv::format_number(r.envelope_ratio) << '\n';
      for (const auto& n : rep.notes) std::cout << "note: " << n << '\n';
      return rep.ok() ? kOk : kFailed;
    }
    if (*conv) {
      if (levels.size() < 3) {
        std::cerr << "convergence-study needs at least three levels\n";
        return kUsage;
      }
      const dmv::SolverConfig c = dmv::load_config(config_path);
      const auto t = dmv::convergence_study(c, levels);
      dmv::write_convergence(out_dir, t);
      auto opt = [](const std::optional<double>& v) { return v ? dmv::format_number(*v) : std::string("n/a"); };
      for (const auto& L : t.levels)
        std::cout << L.n << ": state " << dmv::format_number(L.state_error) << " (" << opt(L.state_order)
                  << "), energy " << dmv::format_number(L.energy_residual) << " (" << opt(L.energy_order) << "), rei "
                  << dmv::format_number(L.rei_residual) << " (" << opt(L.rei_order) << ")\n";
      return kOk;
    }
  } catch (const dmv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const dmv::SolverError& e) {
    std::cerr << "solver failure";
    if (e.time() >= 0.0) std::cerr << " at t = " << dmv::format_number(e.time());
    std::cerr << ": " << e.what() << '\n';
    return kFailed;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const dmv::DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kUsage;
}
