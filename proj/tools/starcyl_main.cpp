#include <CLI11.hpp>
#include <cstdio>

#include "starcyl/experiment.hpp"

using namespace starcyl;

namespace {

int run_one(const std::string& name, const std::string& config, const std::string& out,
            const std::string& format, std::optional<std::uint64_t> seed, bool& all_pass) {
  ExperimentConfig cfg = load_config(name, config, seed);
  Report rep = run_experiment(cfg);
  const auto files = emit_report(rep, format, out);
  std::printf("[%s] %s in %.2fs (config %016llx)\n", rep.all_pass ? "pass" : "FAIL", name.c_str(),
              rep.duration_s, static_cast<unsigned long long>(rep.config_hash));
  for (const auto& t : rep.tables)
    for (const auto& row : t.rows)
      if (!row.empty() && row.back() == "fail") {
        std::string line;
        for (const auto& c : row) line += c + "  ";
        std::printf("    fail: %s :: %s\n", t.name.c_str(), line.c_str());
      }
  for (const auto& f : files) std::printf("    wrote %s\n", f.c_str());
  all_pass &= rep.all_pass;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"starcyl: deformation-quantized cylinder experiments"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "enumerate experiments");

  std::string name, config, out = "out", format = "csv";
  std::uint64_t seed_val = 0;
  bool seed_set = false;
  auto* run = app.add_subcommand("run", "run an experiment (or 'all')");
  run->add_option("experiment", name, "experiment name or 'all'")->required();
  run->add_option("--config", config, "flat key=value config file");
  run->add_option("--out", out, "output directory");
  run->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--seed", seed_val, "seed override")->each([&](const std::string&) {
    seed_set = true;
  });

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& n : experiment_names()) std::printf("%s\n", n.c_str());
    return 0;
  }

  try {
    bool all_pass = true;
    std::optional<std::uint64_t> seed;
    if (seed_set) seed = seed_val;
    if (name == "all") {
      for (const auto& n : experiment_names()) run_one(n, config, out, format, seed, all_pass);
    } else {
      run_one(name, config, out, format, seed, all_pass);
    }
    return all_pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
