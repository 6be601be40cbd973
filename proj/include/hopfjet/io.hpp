#pragma once

#include <hopfjet/contraction.hpp>
#include <hopfjet/linearizer.hpp>

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hopfjet {

using json = nlohmann::ordered_json;

struct RunConfig {
  /// Truncation degree; empty means the default rule.
  std::optional<int> degree;
  int degree_cap = 10;
  double tol_res = 1e-8;
  double tol_cluster = 1e-8;
  double tol_root = 1e-9;
  double tol_indep = 1e-10;
  /// Points per radius in the semiconjugacy check.
  std::size_t samples = 256;
  std::size_t injectivity_pairs = 10000;
  std::size_t potential_samples = 2048;
  std::size_t oracle_points = 100;
  std::vector<double> radii{0.1, 0.05, 0.025};
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::Closure;
  double prune_threshold = 1e-5;
  int power = 1;
  int verbosity = 1;

  /// Throws InvalidInput when a field is out of range.
  void check() const;
};

json config_to_json(const RunConfig& config);
/// Overlays the fields present in j onto base.
RunConfig config_from_json(const json& j, RunConfig base = {});

json complex_to_json(Complex z);
Complex complex_from_json(const json& j, const std::string& where);
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j, const std::string& where);
json polynomial_to_json(const Polynomial& p);

/// Reads a file into JSON; parse errors carry the line and column.
json read_json_file(const std::string& path);

ContractionSpec contraction_from_json(const json& j);
json contraction_to_json(const ContractionSpec& spec);
ContractionSpec parse_contraction(const std::string& path);

json model_to_json(const EmbeddingModel& model);
EmbeddingModel model_from_json(const json& j);

std::vector<CVector> points_from_json(const json& j, int dimension);

/// Hex SHA-256 of the compact serialization of j.
std::string content_hash(const json& j);

}  // namespace hopfjet
