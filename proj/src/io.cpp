#include <hopfjet/io.hpp>

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hopfjet {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::InvalidInput, where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(where, "number is not finite");
  return v;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<int>();
}

Polynomial polynomial_from_json(const json& j, int n, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array of terms");
  Polynomial p;
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string at = where + "[" + std::to_string(t) + "]";
    const json& e = field(j[t], "exponents", at);
    if (!e.is_array() || e.size() != static_cast<std::size_t>(n)) {
      bad(at + ".exponents", "expected " + std::to_string(n) + " non-negative integers");
    }
    std::vector<int> exps;
    for (std::size_t k = 0; k < e.size(); ++k) {
      const int v = integer(e[k], at + ".exponents[" + std::to_string(k) + "]");
      if (v < 0) bad(at + ".exponents[" + std::to_string(k) + "]", "negative exponent");
      exps.push_back(v);
    }
    p.push_back({Multidegree(std::move(exps)), complex_from_json(field(j[t], "coeff", at), at + ".coeff")});
  }
  return p;
}

std::vector<Polynomial> components_from_json(const json& j, int n, const std::string& where) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(n)) {
    bad(where, "expected " + std::to_string(n) + " component polynomials");
  }
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(polynomial_from_json(j[i], n, where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

void RunConfig::check() const {
  if (degree && *degree < 1) bad("config.degree", "must be >= 1");
  if (degree_cap < 1) bad("config.degree_cap", "must be >= 1");
  for (auto [name, v] : {std::pair{"tol_res", tol_res}, {"tol_cluster", tol_cluster},
                         {"tol_root", tol_root}, {"tol_indep", tol_indep},
                         {"prune_threshold", prune_threshold}}) {
    if (!(v > 0.0)) bad(std::string("config.") + name, "must be > 0");
  }
  if (samples == 0 || injectivity_pairs == 0 || potential_samples == 0 || oracle_points == 0) {
    bad("config", "sample counts must be positive");
  }
  if (radii.size() < 2) bad("config.radii", "need at least two radii");
  for (double r : radii) {
    if (!(r > 0.0)) bad("config.radii", "radii must be > 0");
  }
  if (power < 1) bad("config.power", "must be >= 1");
}

json config_to_json(const RunConfig& c) {
  json j;
  j["degree"] = c.degree ? json(*c.degree) : json("auto");
  j["degree_cap"] = c.degree_cap;
  j["tol_res"] = c.tol_res;
  j["tol_cluster"] = c.tol_cluster;
  j["tol_root"] = c.tol_root;
  j["tol_indep"] = c.tol_indep;
  j["samples"] = c.samples;
  j["injectivity_pairs"] = c.injectivity_pairs;
  j["potential_samples"] = c.potential_samples;
  j["oracle_points"] = c.oracle_points;
  j["radii"] = c.radii;
  j["seed"] = c.seed;
  j["strategy"] = to_string(c.strategy);
  j["prune_threshold"] = c.prune_threshold;
  j["power"] = c.power;
  j["verbosity"] = c.verbosity;
  return j;
}

RunConfig config_from_json(const json& j, RunConfig c) {
  if (!j.is_object()) bad("config", "expected an object");
  auto get_size = [&](const char* key, std::size_t& out) {
    if (!j.contains(key)) return;
    const int v = integer(j[key], std::string("config.") + key);
    if (v < 0) bad(std::string("config.") + key, "must be non-negative");
    out = static_cast<std::size_t>(v);
  };
  auto get_double = [&](const char* key, double& out) {
    if (j.contains(key)) out = number(j[key], std::string("config.") + key);
  };
  if (j.contains("degree")) {
    const json& d = j["degree"];
    if (d.is_string() && d.get<std::string>() == "auto") c.degree.reset();
    else c.degree = integer(d, "config.degree");
  }
  if (j.contains("degree_cap")) c.degree_cap = integer(j["degree_cap"], "config.degree_cap");
  get_double("tol_res", c.tol_res);
  get_double("tol_cluster", c.tol_cluster);
  get_double("tol_root", c.tol_root);
  get_double("tol_indep", c.tol_indep);
  get_double("prune_threshold", c.prune_threshold);
  get_size("samples", c.samples);
  get_size("injectivity_pairs", c.injectivity_pairs);
  get_size("potential_samples", c.potential_samples);
  get_size("oracle_points", c.oracle_points);
  if (j.contains("radii")) {
    if (!j["radii"].is_array()) bad("config.radii", "expected an array");
    c.radii.clear();
    for (std::size_t i = 0; i < j["radii"].size(); ++i) {
      c.radii.push_back(number(j["radii"][i], "config.radii[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) bad("config.seed", "expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("strategy")) {
    if (!j["strategy"].is_string()) bad("config.strategy", "expected a string");
    c.strategy = parse_strategy(j["strategy"].get<std::string>());
  }
  if (j.contains("power")) c.power = integer(j["power"], "config.power");
  if (j.contains("verbosity")) c.verbosity = integer(j["verbosity"], "config.verbosity");
  c.check();
  return c;
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) bad(where, "expected [re, im]");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

json matrix_to_json(const CMatrix& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(complex_to_json(m(r, c)));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const json& j, const std::string& where) {
  const int rows = integer(field(j, "rows", where), where + ".rows");
  const int cols = integer(field(j, "cols", where), where + ".cols");
  if (rows < 0 || cols < 0) bad(where, "negative shape");
  const json& data = field(j, "data", where);
  if (!data.is_array() || data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    bad(where + ".data", "expected rows*cols complex entries");
  }
  CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const std::size_t k = static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c);
      m(r, c) = complex_from_json(data[k], where + ".data[" + std::to_string(k) + "]");
    }
  }
  return m;
}

json polynomial_to_json(const Polynomial& p) {
  json out = json::array();
  for (const auto& t : p) {
    out.push_back(json{{"exponents", t.exponents.exponents}, {"coeff", complex_to_json(t.coeff)}});
  }
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    // Byte offset to line/column for the diagnostic.
    std::ifstream again(path);
    std::string text((std::istreambuf_iterator<char>(again)), std::istreambuf_iterator<char>());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << path << ":" << line << ":" << col << ": malformed JSON (" << e.what() << ")";
    throw Error(ErrorKind::InvalidInput, os.str());
  }
}

ContractionSpec contraction_from_json(const json& j) {
  const int n = integer(field(j, "dimension", "contraction"), "contraction.dimension");
  if (n < 1) bad("contraction.dimension", "must be >= 1");
  auto comps = components_from_json(field(j, "components", "contraction"), n, "contraction.components");
  std::optional<std::vector<Polynomial>> inverse;
  if (j.contains("inverse") && !j["inverse"].is_null()) {
    inverse = components_from_json(j["inverse"], n, "contraction.inverse");
  }
  ContractionSpec spec(n, std::move(comps), std::move(inverse));
  if (j.contains("label")) {
    if (!j["label"].is_string()) bad("contraction.label", "expected a string");
    spec.label = j["label"].get<std::string>();
  }
  return spec;
}

json contraction_to_json(const ContractionSpec& spec) {
  json j;
  if (!spec.label.empty()) j["label"] = spec.label;
  j["dimension"] = spec.dimension();
  json comps = json::array();
  for (const auto& p : spec.components()) comps.push_back(polynomial_to_json(p));
  j["components"] = std::move(comps);
  if (spec.inverse()) {
    json inv = json::array();
    for (const auto& p : *spec.inverse()) inv.push_back(polynomial_to_json(p));
    j["inverse"] = std::move(inv);
  }
  return j;
}

ContractionSpec parse_contraction(const std::string& path) {
  return contraction_from_json(read_json_file(path));
}

json model_to_json(const EmbeddingModel& model) {
  json j;
  j["strategy"] = to_string(model.strategy);
  j["dimension"] = model.dimension();
  j["degree"] = model.degree();
  j["N"] = model.size();
  j["convention"] =
      "a_w acts on W-basis coordinates: coords(w o gamma) = a_w * coords(w); at points Psi(gamma(z)) = a_w^T Psi(z)";
  json psi = json::array();
  const MonomialBasis& basis = *model.basis;
  for (Eigen::Index c = 0; c < model.basis_matrix.cols(); ++c) {
    Polynomial p;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const Complex v = model.basis_matrix(static_cast<Eigen::Index>(i), c);
      if (v != Complex{}) p.push_back({basis[i], v});
    }
    psi.push_back(polynomial_to_json(p));
  }
  j["psi"] = std::move(psi);
  j["a_w"] = matrix_to_json(model.a_w);
  j["provenance"] = model.provenance;
  return j;
}

EmbeddingModel model_from_json(const json& j) {
  const std::string where = "model";
  EmbeddingModel model;
  const json& strategy = field(j, "strategy", where);
  if (!strategy.is_string()) bad("model.strategy", "expected a string");
  model.strategy = parse_strategy(strategy.get<std::string>());
  const int n = integer(field(j, "dimension", where), "model.dimension");
  const int d = integer(field(j, "degree", where), "model.degree");
  if (n < 1 || d < 1 || d > 40) bad(where, "dimension and degree must be positive");
  model.basis = MonomialBasis::make(n, d);
  const json& psi = field(j, "psi", where);
  if (!psi.is_array() || psi.empty()) bad("model.psi", "expected a non-empty array");
  const int size = static_cast<int>(psi.size());
  if (j.contains("N") && integer(j["N"], "model.N") != size) bad("model.N", "does not match psi");
  model.basis_matrix = CMatrix::Zero(static_cast<Eigen::Index>(model.basis->size()), size);
  for (int c = 0; c < size; ++c) {
    const std::string at = "model.psi[" + std::to_string(c) + "]";
    for (const auto& t : polynomial_from_json(psi[static_cast<std::size_t>(c)], n, at)) {
      const std::ptrdiff_t i = model.basis->find(t.exponents);
      if (i == MonomialBasis::npos) bad(at, "monomial outside the truncation basis");
      model.basis_matrix(i, c) += t.coeff;
    }
  }
  model.a_w = matrix_from_json(field(j, "a_w", where), "model.a_w");
  if (model.a_w.rows() != size || model.a_w.cols() != size) bad("model.a_w", "shape must be N x N");
  if (j.contains("provenance")) {
    if (!j["provenance"].is_array()) bad("model.provenance", "expected an array");
    for (const auto& s : j["provenance"]) {
      if (!s.is_string()) bad("model.provenance", "expected strings");
      model.provenance.push_back(s.get<std::string>());
    }
  }
  return model;
}

std::vector<CVector> points_from_json(const json& j, int n) {
  const json& arr = j.is_object() ? field(j, "points", "points") : j;
  if (!arr.is_array()) bad("points", "expected an array of points");
  std::vector<CVector> out;
  for (std::size_t p = 0; p < arr.size(); ++p) {
    const std::string at = "points[" + std::to_string(p) + "]";
    if (!arr[p].is_array() || arr[p].size() != static_cast<std::size_t>(n)) {
      bad(at, "expected " + std::to_string(n) + " complex coordinates");
    }
    CVector z(n);
    for (int k = 0; k < n; ++k) z[k] = complex_from_json(arr[p][static_cast<std::size_t>(k)], at + "[" + std::to_string(k) + "]");
    out.push_back(std::move(z));
  }
  return out;
}

std::string content_hash(const json& j) {
  const std::string text = j.dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::Internal, "sha256 failed");
  }
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
  return os.str();
}

}  // namespace hopfjet
