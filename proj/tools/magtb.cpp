#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "magtb/artifacts.hpp"
#include "magtb/cli.hpp"

namespace {

template <class T>
void flag(CLI::App& app, std::vector<std::pair<CLI::Option*, std::function<void(magtb::RunConfig&)>>>& opts,
          const std::string& name, T magtb::RunConfig::*field, const std::string& help) {
  auto value = std::make_shared<T>();
  CLI::Option* o = app.add_option(name, *value, help);
  opts.emplace_back(o, [value, field](magtb::RunConfig& c) { c.*field = *value; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magnetic tight-binding reduction and topology toolkit", "magtb"};
  std::string command;
  std::string config_path;
  std::string suite_path;
  std::vector<std::string> choices = magtb::cli_commands();
  choices.push_back("reproduce");
  app.add_option("command", command, "validate | atomic | hopping | gramian | tb | butterfly | chern | edge | bec | "
                                     "reduce | acceptance | reproduce")
      ->required()
      ->check(CLI::IsMember(choices));
  app.add_option("--config", config_path, "JSON RunConfig; explicit flags override its values")
      ->check(CLI::ExistingFile);
  app.add_option("--suite", suite_path, "suite JSON for reproduce (default: built-in acceptance suite)")
      ->check(CLI::ExistingFile);

  using magtb::RunConfig;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> opts;
  flag(app, opts, "--lattice", &RunConfig::lattice, "square or honeycomb");
  flag(app, opts, "--a", &RunConfig::a, "lattice spacing");
  flag(app, opts, "--nx", &RunConfig::nx, "sites along x");
  flag(app, opts, "--ny", &RunConfig::ny, "sites along y");
  flag(app, opts, "--lambda", &RunConfig::lambda, "field strength");
  flag(app, opts, "--lambdas", &RunConfig::lambdas, "field strengths for the hopping fit");
  flag(app, opts, "--flux", &RunConfig::flux, "plaquette flux as p/q (units of 2 pi)");
  flag(app, opts, "--beta", &RunConfig::beta, "Peierls parameter, used when --flux is absent");
  flag(app, opts, "--vmin", &RunConfig::vmin, "well depth (negative)");
  flag(app, opts, "--r0", &RunConfig::r0, "well radius");
  flag(app, opts, "--profile", &RunConfig::profile, "well profile");
  flag(app, opts, "--size", &RunConfig::size, "bulk sample side length");
  flag(app, opts, "--gap", &RunConfig::gap, "1-based Harper gap index");
  flag(app, opts, "--seed", &RunConfig::seed, "seed for every random draw");
  flag(app, opts, "--out", &RunConfig::out, "output directory");
  flag(app, opts, "--qmax", &RunConfig::qmax, "largest flux denominator for butterfly");
  flag(app, opts, "--disorder-c", &RunConfig::disorder_c, "random hopping amplitude scale c");
  flag(app, opts, "--displace-lambda", &RunConfig::displace_lambda, "random displacement field strength, 0 disables");
  flag(app, opts, "--edge-nx", &RunConfig::edge_nx, "edge sample width");
  flag(app, opts, "--edge-ny", &RunConfig::edge_ny, "edge sample height");
  flag(app, opts, "--wells", &RunConfig::wells, "reduce: 1, 2 or 4 wells");
  flag(app, opts, "--admissible-r", &RunConfig::admissible_r, "reduce: use the r-th admissible lambda");
  flag(app, opts, "--criteria", &RunConfig::criteria, "acceptance criteria to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? magtb::kExitOk : magtb::kExitError;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = magtb::run_config_from_json(nlohmann::json::parse(magtb::read_text(config_path)));
  } catch (const std::exception& e) {
    std::cerr << "magtb: error: config " << config_path << ": " << e.what() << std::endl;
    return magtb::kExitError;
  }
  for (auto& [o, apply] : opts)
    if (o->count() > 0) apply(cfg);
  cfg.command = command;

  if (command == "reproduce") {
    try {
      const magtb::SuiteSummary s = suite_path.empty() ? magtb::reproduce_all(magtb::default_suite(), cfg.out)
                                                       : magtb::reproduce_all(std::filesystem::path(suite_path), cfg.out);
      std::cout << s.table();
      for (const auto& c : s.cases)
        if (c.status != "pass") std::cerr << "magtb reproduce: " << c.name << ": " << c.status << ": " << c.message << std::endl;
      return s.exit_code;
    } catch (const std::exception& e) {
      std::cerr << "magtb reproduce: error: " << e.what() << std::endl;
      return magtb::kExitError;
    }
  }
  const magtb::RunOutcome r = magtb::run(cfg);
  std::cout << r.summary.dump() << std::endl;
  return r.exit_code;
}
