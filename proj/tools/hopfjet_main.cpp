#include <hopfjet/commands.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::vector<double> parse_radii(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument(item);
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hopfjet;
  CLI::App app{"Embed a polynomial Hopf contraction into a linear one and check the result."};
  app.require_subcommand(1, 1);

  std::string contraction, model, points, output, config_path, degree, strategy, radii;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_res, tol_cluster, prune_threshold;
  std::optional<int> power;

  const char* names[][2] = {
      {"validate", "check that the input is a holomorphic contraction"},
      {"operator", "dump the truncated pullback matrix"},
      {"spectrum", "eigenvalues, resonances and root spaces"},
      {"linearize", "build the invariant jet space and its matrix"},
      {"verify", "semiconjugacy, injectivity and oracle checks on a stored model"},
      {"potential", "automorphic potential and its pull-back"},
      {"pipeline", "all stages in order"},
      {"oracle", "per-point residuals from the independent evaluator"},
  };
  for (auto& [name, help] : names) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("contraction", contraction, "contraction JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--model", model, "stored model (bare model or a linearize/pipeline report)");
    sub->add_option("--points", points, "JSON array of points for the oracle");
    sub->add_option("-o,--output", output, "write the report here instead of stdout");
    sub->add_option("--config", config_path, "JSON config file; flags override it")->check(CLI::ExistingFile);
    sub->add_option("--degree", degree, "truncation degree or 'auto'");
    sub->add_option("--strategy", strategy, "closure or root-prune");
    sub->add_option("--samples", samples, "points per radius in the semiconjugacy check");
    sub->add_option("--radii", radii, "comma separated radii, e.g. 0.1,0.05,0.025");
    sub->add_option("--seed", seed, "sampling seed");
    sub->add_option("--tol-res", tol_res, "relative resonance tolerance");
    sub->add_option("--tol-cluster", tol_cluster, "relative eigenvalue clustering tolerance");
    sub->add_option("--prune-threshold", prune_threshold, "near-resonance cutoff for root-prune");
    sub->add_option("--power", power, "iterate power for the operator dump");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();

  RunConfig config;
  try {
    if (!config_path.empty()) config = config_from_json(read_json_file(config_path));
    if (!degree.empty()) {
      if (degree == "auto") {
        config.degree.reset();
      } else {
        std::size_t used = 0;
        const int d = std::stoi(degree, &used);
        if (used != degree.size()) throw Error(ErrorKind::InvalidInput, "--degree: expected an integer or 'auto'");
        config.degree = d;
      }
    }
    if (!strategy.empty()) config.strategy = parse_strategy(strategy);
    if (samples) config.samples = *samples;
    if (!radii.empty()) config.radii = parse_radii(radii);
    if (seed) config.seed = *seed;
    if (tol_res) config.tol_res = *tol_res;
    if (tol_cluster) config.tol_cluster = *tol_cluster;
    if (prune_threshold) config.prune_threshold = *prune_threshold;
    if (power) config.power = *power;
  } catch (const Error& e) {
    std::cerr << "hopfjet: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "hopfjet: bad option value: " << e.what() << "\n";
    return 2;
  }

  CommandInputs inputs;
  inputs.contraction_path = contraction;
  if (!model.empty()) inputs.model_path = model;
  if (!points.empty()) inputs.points_path = points;

  const CommandResult result = run_subcommand(sub, config, inputs);
  const std::string text = result.report.dump(2) + "\n";
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output);
    out << text;
    if (!out) {
      std::cerr << "hopfjet: cannot write " << output << "\n";
      return 2;
    }
  }
  if (result.report.contains("error")) {
    std::cerr << "hopfjet: " << result.report["error"]["message"].get<std::string>() << "\n";
  }
  return result.exit_code;
}
