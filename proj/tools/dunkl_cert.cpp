// dunkl_cert: kernel evaluation, certificates, audits and sweeps.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "dunkl/cli.hpp"
#include "dunkl/errors.hpp"

namespace {

struct Flag {
  const char* name;
  const char* help;
};

constexpr Flag kFlags[] = {
    {"seed", "random seed"},
    {"tol", "tolerance override for every certificate"},
    {"out", "report path (default: standard output)"},
    {"format", "csv or json"},
    {"jobs", "worker threads, 0 for all cores"},
    {"family", "dho, dunkl_heat, gauss or mehler"},
    {"form", "bessel, integral or closed"},
    {"d", "dimension"},
    {"kappa", "multiplicity: one value or d comma-separated values"},
    {"t", "time for kernel evaluation and log-convexity"},
    {"x", "comma-separated point"},
    {"y", "comma-separated point"},
    {"t-min", "smallest grid time"},
    {"t-max", "largest grid time"},
    {"t-count", "number of grid times"},
    {"points", "point pairs per grid time"},
    {"kappa-values", "uniform multiplicities for a kappa sweep"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical certificates for Dunkl heat kernels and Li-Yau / Harnack inequalities"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");

  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  app.add_option("--config", config_path, "flat key = value configuration file");
  for (const Flag& f : kFlags) {
    options[f.name] = app.add_option(std::string("--") + f.name, values[f.name], f.help);
  }

  CLI::App* kernel = app.add_subcommand("kernel", "evaluate a kernel at (t, x, y) in every available form");
  CLI::App* certify = app.add_subcommand("certify", "run inequality certificates");
  std::string which = "all";
  certify->add_option("which", which, "liyau-dho, liyau-dunkl, harnack-dho, harnack-dunkl, lemma41, phi, logconvex, all")
      ->check(CLI::IsMember({"liyau-dho", "liyau-dunkl", "harnack-dho", "harnack-dunkl", "lemma41", "phi",
                             "logconvex", "all"}));
  CLI::App* audit = app.add_subcommand("audit", "normalization, semigroup and heat-equation audits");
  CLI::App* sweep = app.add_subcommand("sweep", "Li-Yau margin table over a grid or over kappa values");
  for (CLI::App* sub : {kernel, certify, audit, sweep}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? dunkl::cli::kOk : dunkl::cli::kUsage;
  }

  dunkl::cli::RunConfig cfg;
  try {
    if (!config_path.empty()) dunkl::cli::load_config_file(cfg, config_path);
    for (const Flag& f : kFlags) {
      if (options[f.name]->count() > 0) dunkl::cli::apply_setting(cfg, f.name, values[f.name]);
    }
  } catch (const dunkl::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dunkl::cli::kUsage;
  }

  std::string command;
  if (kernel->parsed()) command = "kernel";
  if (certify->parsed()) command = "certify";
  if (audit->parsed()) command = "audit";
  if (sweep->parsed()) command = "sweep";
  return dunkl::cli::run(command, which, cfg, std::cerr);
}
