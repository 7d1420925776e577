#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "igabem/errors.hpp"
#include "igabem/study.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

std::string default_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("IGABEM_OUT_DIR"); env && *env) return env;
  return "igabem_out";
}

igabem::CaseConfig load_config_arg(const std::string& path, const std::string& builtin,
                                   std::string* text) {
  if (!builtin.empty()) {
    const igabem::CaseConfig cfg = igabem::builtin_config(builtin);
    *text = igabem::format_case_config(cfg);
    return cfg;
  }
  if (path.empty()) throw igabem::config_error("no config given (file argument or --builtin)");
  if (std::filesystem::path(path).extension() == ".json") {
    return igabem::config_from_manifest(path, text);
  }
  return igabem::load_case_config(path, text);
}

int classify(const std::exception& e) {
  if (dynamic_cast<const igabem::config_error*>(&e)) return kExitConfig;
  if (dynamic_cast<const std::domain_error*>(&e)) return kExitConfig;
  if (dynamic_cast<const igabem::solver_error*>(&e)) return kExitSolver;
  if (dynamic_cast<const igabem::assembly_error*>(&e)) return kExitSolver;
  if (dynamic_cast<const igabem::geometry_error*>(&e)) return kExitSolver;
  if (dynamic_cast<const igabem::singularity_error*>(&e)) return kExitSolver;
  return kExitIo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isogeometric boundary-element solver for an open elastic material surface"};
  app.require_subcommand(1);

  std::string config_path, builtin, out_dir;
  std::vector<int> ladder;
  int reference = 100;
  int samples = 200;

  CLI::App* solve = app.add_subcommand("solve", "solve one case and write its artifacts");
  solve->add_option("config", config_path, "case config file (or run manifest .json)");
  solve->add_option("--builtin", builtin, "built-in case name");
  solve->add_option("--out-dir", out_dir, "output directory (or $IGABEM_OUT_DIR)");

  CLI::App* converge = app.add_subcommand("converge", "mesh refinement study for one case");
  converge->add_option("config", config_path, "case config file");
  converge->add_option("--builtin", builtin, "built-in case name");
  converge->add_option("--ladder", ladder, "element counts to compare")->required();
  converge->add_option("--reference", reference, "reference element count")->required();
  converge->add_option("--samples", samples, "parametric sample count");
  converge->add_option("--out-dir", out_dir, "output directory");

  CLI::App* curvature = app.add_subcommand("curvature-study", "run the four built-in curvature cases");
  curvature->add_option("--out-dir", out_dir, "output directory");

  CLI::App* validate = app.add_subcommand("validate", "check a config without solving");
  validate->add_option("config", config_path, "case config file");
  validate->add_option("--builtin", builtin, "built-in case name");

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string out = default_out_dir(out_dir);
    if (solve->parsed()) {
      std::string text;
      const igabem::CaseConfig cfg = load_config_arg(config_path, builtin, &text);
      const std::string manifest = igabem::run_case(cfg, out, text);
      std::cout << "wrote " << manifest << "\n";
    } else if (converge->parsed()) {
      std::string text;
      const igabem::CaseConfig cfg = load_config_arg(config_path, builtin, &text);
      const igabem::ConvergenceReport report =
          igabem::convergence_study(cfg, ladder, reference, samples);
      std::filesystem::create_directories(out);
      const std::string path = out + "/" + cfg.name + "_convergence.csv";
      igabem::write_convergence_csv(report, path);
      std::cout << "elements dofs error_sigma_tilde error_omega\n";
      for (std::size_t i = 0; i < report.ladder.size(); ++i) {
        std::cout << report.ladder[i] << ' ' << report.dofs[i] << ' ' << report.error_sigma[i]
                  << ' ' << report.error_omega[i] << "\n";
      }
      std::cout << "wrote " << path << "\n";
    } else if (curvature->parsed()) {
      const std::string combined = igabem::curvature_study(out);
      std::cout << "wrote " << combined << "\n";
    } else if (validate->parsed()) {
      std::string text;
      const igabem::CaseConfig cfg = load_config_arg(config_path, builtin, &text);
      const igabem::ResolvedCase rc = igabem::resolve_case(cfg, text);
      igabem::validate_problem(rc.problem);
      std::cout << "config ok: " << cfg.name << "\n"
                << "  elements " << rc.problem.mesh.element_count() << ", control points "
                << rc.problem.curve.control_count() << ", degree " << rc.problem.curve.degree()
                << "\n"
                << "  half-length " << rc.half_length << " nm, surface stiffness "
                << rc.problem.surface.stiffness() << " N/m, surface tension "
                << rc.problem.surface.surface_tension << " N/m\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify(e);
  }
  return kExitOk;
}
