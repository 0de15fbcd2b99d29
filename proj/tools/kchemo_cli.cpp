// kchemo: simulate | dispersion | exponents {solve, region, check}

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kchemo/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Kinetic chemotaxis numerics lab"};
  app.require_subcommand(1);

  std::string sim_config;
  auto* sim = app.add_subcommand("simulate", "Run a configured evolution and write timeseries.csv");
  sim->add_option("config", sim_config, "key = value config file")->required();

  std::string disp_config;
  auto* disp = app.add_subcommand("dispersion", "Fit the free-transport decay rate of a mixed norm");
  disp->add_option("config", disp_config, "key = value config file")->required();

  auto* expo = app.add_subcommand("exponents", "Exponent tools");
  expo->require_subcommand(1);
  std::string q_text;
  auto* solve = expo->add_subcommand("solve", "Solve delta(p; q) = 0 and print the derived chain");
  solve->add_option("--q,q", q_text, "q in (1, 3/2), e.g. 9/7")->required();
  std::string step_text = "1/20", region_out;
  auto* region = expo->add_subcommand("region", "Rasterise the admissible (q', p') region as CSV");
  region->add_option("--step", step_text, "grid step (rational or decimal)");
  region->add_option("--out,-o", region_out, "output file (default stdout)");
  std::vector<std::string> quad;
  int dim = 3;
  auto* check = expo->add_subcommand("check", "Check a Strichartz quadruple r p q a");
  check->add_option("quad", quad, "r p q a")->expected(4)->required();
  check->add_option("--dim,-d", dim, "dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kchemo::kExitConfig;
  }

  if (*sim) return kchemo::run_simulate(sim_config, std::cout, std::cerr);
  if (*disp) return kchemo::run_dispersion(disp_config, std::cout, std::cerr);
  if (*solve) return kchemo::run_exponents_solve(q_text, std::cout, std::cerr);
  if (*region) return kchemo::run_exponents_region(step_text, region_out, std::cout, std::cerr);
  if (*check) return kchemo::run_exponents_check(quad, dim, std::cout, std::cerr);
  return kchemo::kExitConfig;
}
