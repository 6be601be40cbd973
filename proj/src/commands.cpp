#include <hopfjet/commands.hpp>

#include <hopfjet/koopman.hpp>
#include <hopfjet/linalg.hpp>
#include <hopfjet/oracle.hpp>
#include <hopfjet/potential.hpp>
#include <hopfjet/sampling.hpp>
#include <hopfjet/spectral.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hopfjet {

namespace {

constexpr const char* kSubcommands[] = {"validate", "operator", "spectrum", "linearize",
                                        "verify",   "potential", "pipeline", "oracle"};

json verdict(bool ok) { return ok ? "pass" : "fail"; }

json complex_list(const std::vector<Complex>& v) {
  json out = json::array();
  for (Complex z : v) out.push_back(complex_to_json(z));
  return out;
}

json exponents_json(const Multidegree& a) { return a.exponents; }

// JSON cannot carry inf; use null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

class Run {
 public:
  Run(const RunConfig& config, const CommandInputs& inputs) : config_(config), inputs_(inputs) {}

  json sections = json::object();

  const ContractionSpec& spec() {
    if (!spec_) {
      if (inputs_.contraction) echo_ = *inputs_.contraction;
      else if (inputs_.contraction_path) echo_ = read_json_file(*inputs_.contraction_path);
      else throw Error(ErrorKind::InvalidInput, "no contraction given");
      spec_ = contraction_from_json(echo_);
    }
    return *spec_;
  }
  const json& echo() const { return echo_; }

  int degree() {
    if (!degree_) degree_ = config_.degree ? *config_.degree : default_degree(spec(), config_.degree_cap);
    return *degree_;
  }

  void validate() {
    ValidationOptions opts;
    opts.seed = config_.seed;
    const ContractionDiagnostics diag = hopfjet::validate(spec(), opts);
    json s;
    s["sigma_max"] = diag.sigma_max;
    s["sigma_min"] = diag.sigma_min;
    s["eigenvalues"] = complex_list(diag.eigenvalues);
    s["entry_steps"] = diag.entry_steps;
    s["escaped_samples"] = diag.escaped_samples;
    s["unsettled_samples"] = diag.unsettled_samples;
    s["test_sphere_radius"] = opts.r_k;
    s["target_ball_radius"] = opts.r_u;
    s["orbit_samples"] = opts.samples;
    s["tolerance"] = "sigma_max < 1 exactly; every sampled orbit enters the target ball";
    s["scope"] = diag.scope;
    s["verdict"] = verdict(diag.contraction);
    sections["validate"] = std::move(s);

    json inv;
    try {
      const InverseReport rep = check_inverse(spec(), 0, 256, config_.seed);
      inv["supplied"] = rep.supplied;
      inv["degree"] = rep.degree;
      inv["jet_residual"] = rep.jet_residual;
      inv["point_residual"] = rep.point_residual;
      inv["tolerance"] = 1e-10;
      inv["note"] = rep.note;
      inv["verdict"] = verdict(rep.passed || !rep.supplied);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::VerificationFailure) throw;
      inv["error"] = e.what();
      inv["tolerance"] = 1e-10;
      inv["verdict"] = "fail";
    }
    sections["inverse"] = std::move(inv);
  }

  void operator_dump(bool with_matrix) {
    const KoopmanMatrix t = build_koopman(spec(), degree(), config_.power);
    json s;
    s["degree"] = degree();
    s["power"] = config_.power;
    s["size"] = t.basis->size();
    const double defect = block_triangularity_defect(t);
    s["block_triangularity_defect"] = defect;
    s["tolerance"] = 0.0;
    const CompactnessProbe probe = compactness_probe(t);
    s["block_norms"] = probe.block_norms;
    s["decay_rate"] = probe.rate;
    if (with_matrix) {
      json basis = json::array();
      for (const auto& a : t.basis->monomials()) basis.push_back(exponents_json(a));
      s["basis"] = std::move(basis);
      s["convention"] = "column a holds the coefficients of z^a o gamma^k";
      s["matrix"] = matrix_to_json(t.matrix);
    }
    s["verdict"] = verdict(defect == 0.0);
    sections["operator"] = std::move(s);
  }

  void spectrum() {
    const KoopmanMatrix t = build_koopman(spec(), degree(), 1);
    json s;
    s["degree"] = degree();
    json mono = json::array();
    for (const auto& me : monomial_eigenvalues(spec().linear_part(), degree())) {
      mono.push_back(json{{"alpha", exponents_json(me.alpha)}, {"value", complex_to_json(me.value)}});
    }
    s["monomial_eigenvalues"] = std::move(mono);

    ResonanceOptions ropts;
    ropts.tol_res = config_.tol_res;
    json res = json::array();
    for (const auto& r : detect_resonances(spec().linear_part(), degree(), ropts)) {
      json row{{"target", exponents_json(r.target)},
               {"source", exponents_json(r.source)},
               {"defect", r.defect},
               {"relative_defect", r.relative_defect},
               {"kind", to_string(r.kind)}};
      if (r.target_coordinate) row["target_coordinate"] = *r.target_coordinate;
      res.push_back(std::move(row));
    }
    s["resonances"] = std::move(res);
    s["resonance_tolerance"] = {{"exact", ropts.tol_res}, {"near", ropts.tol_res * ropts.near_factor}};

    SpectralTolerances tol{config_.tol_cluster, config_.tol_root, config_.tol_indep};
    s["cluster_tolerance"] = tol.cluster;
    s["root_tolerance"] = tol.root;
    s["independence_tolerance"] = tol.indep;
    bool ok = true;
    try {
      const RootDecomposition rd = root_decomposition(t, tol);
      const double scale = std::max(1.0, t.matrix.norm());
      json clusters = json::array();
      for (const auto& c : rd.clusters) {
        json row;
        row["value"] = complex_to_json(c.value);
        row["multiplicity"] = c.multiplicity();
        json chains = json::array();
        double worst = 0.0;
        for (const auto& v : c.vectors) {
          chains.push_back(v.chain_length);
          worst = std::max(worst, v.residual / std::pow(scale, v.chain_length));
        }
        row["chain_lengths"] = std::move(chains);
        row["max_relative_residual"] = worst;
        row["min_singular_value"] = c.min_singular_value;
        ok = ok && worst <= tol.root;
        clusters.push_back(std::move(row));
      }
      s["clusters"] = std::move(clusters);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::IllConditioned) throw;
      s["error"] = e.what();
      ok = false;
    }
    s["verdict"] = verdict(ok);
    sections["spectrum"] = std::move(s);
  }

  const EmbeddingModel& linearize() {
    if (model_) return *model_;
    if (inputs_.model || inputs_.model_path) {
      json j = inputs_.model ? *inputs_.model : read_json_file(*inputs_.model_path);
      // Accept a full report as well as a bare model.
      if (j.is_object() && j.contains("sections") && j["sections"].contains("linearize")) {
        j = j["sections"]["linearize"]["model"];
      }
      model_ = model_from_json(j);
      if (model_->dimension() != spec().dimension()) {
        throw Error(ErrorKind::InvalidInput, "model dimension does not match the contraction");
      }
      degree_ = model_->degree();
    } else if (config_.strategy == Strategy::Closure) {
      model_ = linearize_closure(spec(), degree());
    } else {
      model_ = linearize_root_prune(spec(), degree(), {config_.tol_res, config_.prune_threshold});
    }

    const KoopmanMatrix t = build_koopman(spec(), model_->degree(), 1);
    json s;
    s["strategy"] = to_string(model_->strategy);
    s["degree"] = model_->degree();
    s["N"] = model_->size();
    const double inv = invariance_residual(*model_, t.matrix);
    const double inv_tol = 1e-10 * std::max(1.0, t.matrix.norm());
    s["invariance_residual"] = inv;
    s["invariance_tolerance"] = inv_tol;

    const auto aw_eig = eigenvalues(model_->a_w);
    s["a_w_eigenvalues"] = complex_list(aw_eig);
    double containment = 0.0;
    const auto mono = monomial_eigenvalues(spec().linear_part(), model_->degree());
    for (Complex mu : aw_eig) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& me : mono) best = std::min(best, std::abs(me.value - mu));
      containment = std::max(containment, best);
    }
    s["spectrum_containment_defect"] = containment;
    s["spectrum_containment_tolerance"] = 1e-8;
    s["model"] = model_to_json(*model_);
    s["verdict"] = verdict(inv <= inv_tol && containment <= 1e-8);
    sections["linearize"] = std::move(s);
    return *model_;
  }

  void semiconjugacy() {
    SemiconjugacyOptions opts;
    opts.radii = config_.radii;
    opts.samples = config_.samples;
    opts.seed = config_.seed;
    const SemiconjugacyReport rep = verify_semiconjugacy(linearize(), spec(), opts);
    json s;
    json rows = json::array();
    for (const auto& r : rep.per_radius) {
      rows.push_back(json{{"radius", r.radius}, {"max_residual", r.max_residual}, {"max_psi", r.max_psi}});
    }
    s["per_radius"] = std::move(rows);
    s["samples_per_radius"] = opts.samples;
    s["exact"] = rep.exact;
    s["exact_tolerance"] = opts.exact_tol;
    s["exponent"] = num(rep.exponent);
    s["fit_r2"] = rep.fit_r2;
    s["exponent_threshold"] = rep.exponent_threshold;
    s["verdict"] = verdict(rep.passed);
    sections["semiconjugacy"] = std::move(s);
  }

  void injectivity() {
    InjectivityOptions opts;
    opts.pairs = config_.injectivity_pairs;
    opts.seed = config_.seed;
    const InjectivityReport rep = verify_injectivity(linearize(), spec(), opts);
    json s;
    s["annulus"] = {opts.r_inner, opts.r_outer};
    s["pairs"] = rep.pairs;
    s["collisions"] = rep.collisions;
    s["collision_thresholds"] = {{"image", opts.collision_image}, {"source", opts.collision_source}};
    s["min_distance_ratio"] = num(rep.min_ratio);
    s["min_jacobian_singular_value"] = num(rep.min_jacobian_singular_value);
    s["min_jacobian_tolerance"] = opts.min_jacobian;
    s["verdict"] = verdict(rep.passed);
    sections["injectivity"] = std::move(s);
  }

  void oracle(bool with_table) {
    const EmbeddingModel& model = linearize();
    std::vector<CVector> points;
    if (inputs_.points) points = points_from_json(*inputs_.points, spec().dimension());
    else if (inputs_.points_path) points = points_from_json(read_json_file(*inputs_.points_path), spec().dimension());
    else points = annulus_points(spec().dimension(), config_.oracle_points, 0.1, 1.0, config_.seed + 7);

    const auto rows = oracle_residuals(spec().components(), model_polynomials(model), model.a_w, points);
    json table = json::array();
    bool ok = true;
    double worst = 0.0;
    for (const auto& row : rows) {
      const double main = verifier_residual(model, spec(), row.point);
      const bool agree = residuals_agree(main, row.residual, row.psi_norm);
      ok = ok && agree;
      worst = std::max(worst, row.residual);
      if (with_table) {
        json pt = json::array();
        for (Eigen::Index k = 0; k < row.point.size(); ++k) pt.push_back(complex_to_json(row.point[k]));
        table.push_back(json{{"point", std::move(pt)},
                             {"oracle_residual", row.residual},
                             {"verifier_residual", main},
                             {"agree", agree}});
      }
    }
    json s;
    s["points"] = rows.size();
    s["max_oracle_residual"] = worst;
    s["agreement_rule"] = "within a factor of 2, or both below 1e-13 * max(1, |Psi|)";
    if (with_table) s["table"] = std::move(table);
    s["verdict"] = verdict(ok);
    sections["oracle"] = std::move(s);
  }

  void potential() {
    const EmbeddingModel& model = linearize();
    const LinearHopfModel lm = export_linear_hopf(model);
    json lh;
    lh["N"] = lm.size();
    lh["matrix"] = matrix_to_json(lm.contraction);
    lh["convention"] = "Psi(gamma(z)) = matrix * Psi(z); the deck group is generated by matrix";
    lh["eigenvalues"] = complex_list(lm.eigenvalues);
    lh["sigma_max"] = lm.sigma_max();
    lh["sigma_min"] = lm.sigma_min();
    lh["diagonalizable"] = lm.diagonalizable;
    lh["eigenvector_condition"] = num(lm.condition);
    lh["verdict"] = "pass";
    sections["linear_hopf"] = std::move(lh);

    PotentialModel pot;
    double defect_tol = 1e-11;
    std::string note;
    if (lm.diagonalizable) {
      pot = build_potential(lm);
    } else {
      bool built = false;
      if (lm.size() <= 16) {
        try {
          pot = build_level_potential(lm, 64, config_.seed);
          defect_tol = 1e-9;
          built = true;
          note = "non-diagonalizable: exact level-time potential";
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::IllConditioned) throw;
          note = std::string(e.what()) + "; ";
        }
      }
      if (!built) {
        const ApproxPotential ap = build_potential_approx(lm, 1e-4, 1e-9, 1024, config_.seed);
        pot = ap.potential;
        defect_tol = 1e-9;
        note += ap.approximate ? "approximate: perturbed potential exceeds the defect bound" : "perturbed potential";
      }
    }

    const auto sphere = sphere_points(lm.size(), 4096, 1.0, config_.seed + 3);
    const double defect = automorphy_defect(pot, lm.contraction, sphere);
    std::vector<CVector> psh_points;
    for (const auto& w : sphere) {
      if (psh_points.size() == 256) break;
      if (away_from_hyperplanes(pot, w)) psh_points.push_back(w);
    }
    const PshReport psh = check_psh(pot, psh_points);

    json s;
    s["kind"] = to_string(pot.kind);
    s["c"] = pot.c;
    if (pot.kind == PotentialKind::LevelTime) {
      s["generator"] = matrix_to_json(pot.generator);
      s["metric"] = matrix_to_json(pot.metric);
    } else {
      s["beta"] = pot.beta;
      s["transform"] = matrix_to_json(pot.transform);
    }
    if (!note.empty()) s["note"] = note;
    s["automorphy_samples"] = sphere.size();
    s["automorphy_defect"] = defect;
    s["automorphy_tolerance"] = defect_tol;
    s["psh_samples"] = psh.samples;
    s["levi_min_eigenvalue"] = psh.min_eigenvalue;
    s["levi_tolerance"] = -1e-6;
    s["verdict"] = verdict(defect <= defect_tol && psh.passed);
    sections["potential"] = std::move(s);

    PullbackOptions popts;
    popts.samples = config_.potential_samples;
    popts.seed = config_.seed;
    const PullbackReport pb = pull_back_potential(pot, model, spec(), popts, defect);
    json p;
    p["annulus"] = {popts.r_inner, popts.r_outer};
    p["samples"] = pb.samples;
    p["degenerate_samples"] = pb.degenerate;
    p["max_relative_defect"] = pb.max_relative_defect;
    p["max_relative_semiconjugacy_residual"] = pb.max_relative_residual;
    const double tol = std::max(1e-9, pb.bound);
    p["tolerance"] = tol;
    p["verdict"] = verdict(pb.degenerate == 0 && pb.max_relative_defect <= tol);
    sections["pullback"] = std::move(p);
  }

  json scope() const {
    json s;
    s["claim"] = "numerical evidence on sampled sets at the stated tolerances, not a proof";
    s["orbit_sampling"] = "sphere |z| = 1, orbits must enter |z| <= 0.1";
    s["semiconjugacy_radii"] = config_.radii;
    s["injectivity_annulus"] = {0.1, 1.0};
    s["potential_samples"] = "unit sphere of C^N (4096) and annulus 0.1 <= |z| <= 1";
    if (degree_) s["truncation_degree"] = *degree_;
    s["not_checked"] = {"proper discontinuity of the deck action", "spectrum of the operator on function spaces"};
    s["seed"] = config_.seed;
    return s;
  }

 private:
  const RunConfig& config_;
  const CommandInputs& inputs_;
  std::optional<ContractionSpec> spec_;
  json echo_;
  std::optional<int> degree_;
  std::optional<EmbeddingModel> model_;
};

}  // namespace

CommandResult run_subcommand(const std::string& name, const RunConfig& config, const CommandInputs& inputs) {
  CommandResult result;
  json& report = result.report;
  report["tool"] = "hopfjet";
  report["subcommand"] = name;
  Run run(config, inputs);
  std::optional<Error> failure;
  try {
    if (std::find(std::begin(kSubcommands), std::end(kSubcommands), name) == std::end(kSubcommands)) {
      throw Error(ErrorKind::InvalidInput, "unknown subcommand '" + name + "'");
    }
    config.check();
    run.spec();
    if (name == "validate") {
      run.validate();
    } else if (name == "operator") {
      run.operator_dump(true);
    } else if (name == "spectrum") {
      run.spectrum();
    } else if (name == "linearize") {
      run.linearize();
    } else if (name == "verify") {
      if (!inputs.model && !inputs.model_path) throw Error(ErrorKind::InvalidInput, "verify needs a model");
      run.linearize();
      run.semiconjugacy();
      run.injectivity();
      run.oracle(false);
    } else if (name == "potential") {
      run.validate();
      run.potential();
    } else if (name == "oracle") {
      run.oracle(true);
    } else {
      run.validate();
      run.operator_dump(false);
      run.spectrum();
      run.linearize();
      run.semiconjugacy();
      run.injectivity();
      run.oracle(false);
      run.potential();
    }
  } catch (const Error& e) {
    failure = e;
  } catch (const std::exception& e) {
    failure = Error(ErrorKind::Internal, e.what());
  }

  json input;
  input["contraction"] = run.echo();
  input["sha256"] = content_hash(run.echo());
  report["input"] = std::move(input);
  report["config"] = config_to_json(config);
  report["scope_of_certification"] = run.scope();
  report["sections"] = run.sections;

  bool ok = !failure;
  for (const auto& [key, section] : run.sections.items()) ok = ok && section["verdict"] == "pass";
  if (failure) {
    report["error"] = {{"kind", to_string(failure->kind())}, {"message", failure->what()}};
    result.exit_code = exit_code_for(failure->kind());
  } else {
    result.exit_code = ok ? 0 : 4;
  }
  report["verdict"] = verdict(ok);
  report["exit_code"] = result.exit_code;
  return result;
}

}  // namespace hopfjet
