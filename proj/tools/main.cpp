#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pxinf/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet p(x)-energy toolkit with an unbounded-exponent subdomain"};
  app.require_subcommand(1);

  std::string config_path, preset, expect, out;
  std::vector<std::string> params;
  int n = 0, resolution = 0;

  const struct {
    const char* name;
    const char* help;
    bool has_n, has_resolution, has_expect;
  } commands[] = {
      {"solve", "minimize one truncated energy and write solution.csv + stats.json",
       true, false, false},
      {"sweep", "run the truncation schedule and classify the limit regime",
       false, false, false},
      {"oracle1d", "closed-form interval solution, written as oracle.csv + oracle.json",
       true, true, false},
      {"check", "pointwise equation and transmission diagnostics on solution.csv",
       false, true, false},
      {"feasibility", "contact-set trace scan, written as feasibility.json",
       false, true, true},
  };

  for (const auto& c : commands) {
    CLI::App* cmd = app.add_subcommand(c.name, c.help);
    cmd->add_option("--config", config_path, "problem description (JSON file)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--preset", preset, "named scenario");
    cmd->add_option("--param", params, "preset parameter override, key=value");
    cmd->add_option("--out", out, "output directory")->required();
    if (c.has_n) cmd->add_option("--n", n, "truncation level");
    if (c.has_resolution)
      cmd->add_option("--resolution", resolution, "sample count");
    if (c.has_expect)
      cmd->add_option("--expect", expect, "fail (exit 3) if contradicted")
          ->check(CLI::IsMember({"nonempty", "empty"}));
  }

  CLI11_PARSE(app, argc, argv);

  CLI::App* got = app.get_subcommands().front();
  pxinf::RunOptions opt;
  opt.command = got->get_name();
  opt.out_dir = out;
  if (got->count("--config")) opt.config_path = config_path;
  if (got->count("--preset")) opt.preset = preset;
  for (const std::string& kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cout << "error: --param needs key=value, got '" << kv << "'\n";
      return 1;
    }
    opt.params.insert_or_assign(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (CLI::Option* o = got->get_option_no_throw("--n"); o && o->count()) opt.n = n;
  if (CLI::Option* o = got->get_option_no_throw("--resolution"); o && o->count())
    opt.resolution = resolution;
  if (CLI::Option* o = got->get_option_no_throw("--expect"); o && o->count())
    opt.expect = expect;

  return pxinf::run_command(opt, std::cout);
}
