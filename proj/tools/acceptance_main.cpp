#include "alsigns/acceptance.hpp"
#include "alsigns/parallel.hpp"
#include "runtime.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv) {
  using namespace alsigns;
  CLI::App app{"Runs every acceptance criterion and prints one PASS/FAIL line each."};
  AcceptanceOptions opt;
  opt.workers = default_workers();
  std::string cache;
  std::vector<int> only;
  app.add_option("--workers", opt.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "seed for the sampled criteria");
  app.add_option("--cache", cache, "Hurwitz table cache path, or 'none'");
  app.add_option("--only", only, "run only these criteria")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);
  opt.only.insert(only.begin(), only.end());
  tools::install_table(kDefaultSieveBound, cache.empty() ? tools::default_cache_path(kDefaultSieveBound) : cache,
                       opt.workers);
  bool all = true;
  run_acceptance(opt, [&](const CriterionResult &r) {
    std::cout << format_result(r) << std::endl;
    all = all && r.pass;
  });
  return all ? 0 : 1;
}
