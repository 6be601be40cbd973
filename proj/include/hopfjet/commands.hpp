#pragma once

#include <hopfjet/io.hpp>

#include <optional>
#include <string>

namespace hopfjet {

/// Inputs by path or already parsed; a parsed value wins over a path.
struct CommandInputs {
  std::optional<std::string> contraction_path;
  std::optional<json> contraction;
  std::optional<std::string> model_path;
  std::optional<json> model;
  std::optional<std::string> points_path;
  std::optional<json> points;
};

struct CommandResult {
  json report;
  int exit_code = 0;
};

/// validate, operator, spectrum, linearize, verify, potential, pipeline, oracle.
/// Never throws; failures are reported in the document and the exit code.
CommandResult run_subcommand(const std::string& name, const RunConfig& config, const CommandInputs& inputs);

}  // namespace hopfjet
