// Apache License, Version 2.0, refer to LICENSE.txt
#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "puchain/puchain.hpp"
#include "trajectory_file.hpp"

namespace puchain::cli {

namespace {

// ---------------------------------------------------------------------------
// Option storage

struct SimulateOptions {
  std::string model;
  int n = 0;
  double p = 0.5;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  StateIndex x0 = 0;
  std::string matrix;
  std::string method = "matrix";
  std::string out;
  bool dyads = false;
  std::size_t replicates = 1;
  std::size_t jobs = 1;
};

struct DetectOptions {
  std::string matrix;
  bool normalize = false;
  double tol = kDefaultMatchTolerance;
  std::string out;
};

struct TransformOptions {
  std::string traj;
  std::string family;
  bool inverse = false;
  std::optional<StateIndex> x0;
  std::string out;
};

struct FitOptions {
  std::string traj;
  std::string model;
  std::string out;
};

struct PartitionOptions {
  std::string model;
  std::vector<double> theta;
  bool brute = false;
  double inject_mismatch = 0.0;
  std::string out;
};

struct DiagnoseOptions {
  std::string traj;
  std::string stat;
  std::optional<double> target;
  std::string csv;
  std::string out;
};

struct ExchangeabilityOptions {
  int n = 0;
  int t = 1;
  std::string stat;
  std::string mu;
  std::string family = "identity";
  double p = 0.3;
  std::string out;
};

struct SampleOptions {
  std::string model;
  std::vector<double> theta;
  std::uint64_t seed = 0;
  std::size_t count = 1;
  std::string out;
};

// ---------------------------------------------------------------------------
// Shared helpers

void emit(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << '\n';
    return;
  }
  std::ofstream file(path);
  if (!file) throw FormatError("cannot write '" + path + "'");
  file << j.dump(2) << '\n';
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

StochasticMatrix load_matrix(const std::string& path, bool normalize) {
  if (ends_with(path, ".csv")) return matrix_from_csv(read_text_file(path), normalize);
  json j = read_json_file(path);
  if (normalize) {
    if (j.is_array()) j = json{{"matrix", j}};
    j["normalize"] = true;
  }
  return matrix_from_json(j);
}

TrajectoryFile load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return read_trajectory_file(in);
}

StateSpace header_space(const json& header) {
  if (!header.contains("space")) throw FormatError("trajectory header has no space");
  return space_from_json(header.at("space"));
}

std::string header_string(const json& header, const char* key) {
  return header.contains(key) && header.at(key).is_string() ? header.at(key).get<std::string>() : std::string();
}

/// The family that makes the named chain's companion sequence iid.
FamilyKind family_for_model(const std::string& model) {
  if (model == "density") return FamilyKind::identity;
  if (model == "stability") return FamilyKind::stability;
  if (model == "modular") return FamilyKind::modular;
  throw FormatError("no default family for model '" + model + "'; pass --family");
}

PermutationFamily resolve_family(const std::string& spec, const std::string& model, const StateSpace& space) {
  if (spec.empty()) return builtin_family(family_for_model(model), space);
  if (spec == "identity" || spec == "symdiff" || spec == "stability" || spec == "modular") {
    return builtin_family(family_kind_from_string(spec), space);
  }
  return family_from_json(read_json_file(spec), &space);
}

std::vector<ParamVector> group_theta(const std::vector<double>& values, const ParameterMap& eta) {
  if (values.empty()) return eta.default_probes();
  const std::size_t d = eta.param_dim();
  if (values.size() % d != 0) {
    throw std::invalid_argument("--theta needs a multiple of " + std::to_string(d) + " values");
  }
  std::vector<ParamVector> probes;
  for (std::size_t i = 0; i < values.size(); i += d) {
    probes.emplace_back(values.begin() + static_cast<std::ptrdiff_t>(i),
                        values.begin() + static_cast<std::ptrdiff_t>(i + d));
  }
  return probes;
}

double relative_error(double x, double reference) {
  return std::abs(x - reference) / std::max(1.0, std::abs(reference));
}

// ---------------------------------------------------------------------------
// simulate

struct NamedChain {
  StateSpace space;
  StochasticMatrix P;
  std::optional<Pmf> mu;
  std::optional<PermutationFamily> family;
};

NamedChain named_chain(const SimulateOptions& o) {
  if (o.model == "density" || o.model == "stability") {
    if (o.n < 2) throw std::invalid_argument("--n must be at least 2");
    const StateSpace space = StateSpace::multigraph(o.n, 1);
    const bool density = o.model == "density";
    return {space, density ? density_matrix(o.n, o.p) : stability_matrix(o.n, o.p), erdos_renyi_pmf(o.n, o.p),
            builtin_family(density ? FamilyKind::identity : FamilyKind::stability, space)};
  }
  if (o.model == "modular") {
    const StateSpace space = StateSpace::modular(o.n);
    return {space, modular_chain_matrix(o.n), modular_step_pmf(o.n), builtin_family(FamilyKind::modular, space)};
  }
  if (o.model == "custom") {
    if (o.matrix.empty()) throw std::invalid_argument("--model custom needs --matrix");
    StochasticMatrix P = load_matrix(o.matrix, false);
    const StateSpace space = StateSpace::generic(P.size());
    if (o.method == "puniform") {
      auto witness = detect_puniform(P);
      if (!witness) throw std::invalid_argument("--method puniform needs a p-uniform matrix");
      return {space, std::move(P), witness->common_row(), witness->family()};
    }
    return {space, std::move(P), std::nullopt, std::nullopt};
  }
  throw std::invalid_argument("unknown model '" + o.model + "'");
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
  if (o.replicates == 0) throw std::invalid_argument("--replicates must be positive");
  const NamedChain chain = named_chain(o);
  if (o.x0 >= chain.space.size()) throw std::invalid_argument("--x0 is out of range");

  TrajectoryFile file;
  file.header = {{"space", to_json(chain.space)}, {"model", o.model}, {"steps", o.steps}, {"seed", o.seed},
                 {"x0", o.x0}, {"method", o.method}, {"replicates", o.replicates}, {"iid", false}};
  if (o.model == "density" || o.model == "stability") {
    file.header["n"] = o.n;
    file.header["p"] = o.p;
  }
  if (o.model == "modular") file.header["n"] = o.n;
  if (chain.family) file.header["family"] = to_string(chain.family->kind());

  file.replicates.resize(o.replicates);
  auto work = [&](std::size_t r) {
    const Trajectory x = o.method == "puniform"
                             ? sample_puniform_chain(*chain.mu, *chain.family, o.x0, o.steps, o.seed, r)
                             : sample_chain(chain.P, o.x0, o.steps, o.seed, r);
    file.replicates[r].assign(x.states().begin(), x.states().end());
  };
  if (o.method != "matrix" && o.method != "puniform") throw std::invalid_argument("--method is matrix or puniform");
  const std::size_t jobs = std::max<std::size_t>(1, std::min(o.jobs, o.replicates));
  std::vector<std::thread> workers;
  for (std::size_t j = 0; j < jobs; ++j) {
    workers.emplace_back([&, j] {
      for (std::size_t r = j; r < o.replicates; r += jobs) work(r);
    });
  }
  for (auto& w : workers) w.join();

  const StateSpace* dyads = o.dyads && chain.space.kind() == SpaceKind::multigraph ? &chain.space : nullptr;
  if (o.out.empty()) {
    write_trajectory_file(out, file, dyads);
  } else {
    std::ofstream f(o.out);
    if (!f) throw FormatError("cannot write '" + o.out + "'");
    write_trajectory_file(f, file, dyads);
  }
  err << "simulated " << o.replicates << " x " << o.steps << " steps of the " << o.model << " chain\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// detect

int cmd_detect(const DetectOptions& o, std::ostream& out, std::ostream& err) {
  const StochasticMatrix P = load_matrix(o.matrix, o.normalize);
  const PuniformAnalysis analysis = analyze_puniform(P, o.tol);
  if (analysis.witness) {
    emit(to_json(*analysis.witness), o.out, out);
    err << "p-uniform\n";
  } else {
    json j = {{"puniform", false}};
    if (analysis.violation) j["violation"] = *analysis.violation;
    emit(j, o.out, out);
    err << "not p-uniform\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// transform

int cmd_transform(const TransformOptions& o, std::ostream& out, std::ostream& err) {
  TrajectoryFile file = load_trajectory(o.traj);
  const StateSpace space = header_space(file.header);
  const std::string model = header_string(file.header, "model");
  const std::string family_spec = o.family.empty() ? header_string(file.header, "family") : o.family;
  const PermutationFamily family = resolve_family(family_spec, model, space);

  const bool is_iid = file.header.value("iid", false);
  if (o.inverse != is_iid) {
    throw std::invalid_argument(o.inverse ? "--inverse expects an iid sequence" : "trajectory is already iid");
  }
  const StateIndex x0 = o.x0 ? *o.x0 : file.header.value("x0", StateIndex{0});
  for (auto& states : file.replicates) {
    const Trajectory input(space.size(), states);
    const Trajectory result = o.inverse ? iid_to_chain(x0, input, family) : chain_to_iid(input, family);
    states.assign(result.states().begin(), result.states().end());
  }
  file.header["iid"] = !o.inverse;
  file.header["family"] = family_spec.empty() ? to_string(family.kind()) : family_spec;
  if (o.inverse) file.header["x0"] = x0;

  if (o.out.empty()) {
    write_trajectory_file(out, file);
  } else {
    std::ofstream f(o.out);
    if (!f) throw FormatError("cannot write '" + o.out + "'");
    write_trajectory_file(f, file);
  }
  err << (o.inverse ? "rebuilt chain from iid sequence\n" : "transformed chain to iid sequence\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// fit

json fit_json(const MleEstimate& est, std::ostream& err) {
  if (est.boundary) err << "warning: p_hat lies on the boundary of (0, 1)\n";
  return {{"p_hat", est.p_hat}, {"boundary", est.boundary}, {"transitions", est.transitions}};
}

int cmd_fit(const FitOptions& o, std::ostream& out, std::ostream& err) {
  const TrajectoryFile file = load_trajectory(o.traj);
  const StateSpace space = header_space(file.header);
  const std::string model = o.model.empty() ? header_string(file.header, "model") : o.model;
  if (model != "density" && model != "stability") throw std::invalid_argument("fit supports density and stability");
  const bool is_iid = file.header.value("iid", false);
  if (is_iid) {
    const std::string family = header_string(file.header, "family");
    if (family != "identity" && family != "stability") {
      throw std::invalid_argument("an iid file must come from the identity or stability family");
    }
  }

  json fits = json::array();
  for (const auto& states : file.replicates) {
    const Trajectory x(space.size(), states);
    const MleEstimate est =
        is_iid ? mle_from_iid(x, space)
               : mle_density_stability(x, space, model == "density" ? GraphChainModel::density : GraphChainModel::stability);
    fits.push_back(fit_json(est, err));
  }
  json result = {{"model", model}, {"n", space.n()}, {"iid_input", is_iid}};
  if (fits.size() == 1) {
    result.update(fits.front());
  } else {
    result["replicates"] = fits;
  }
  emit(result, o.out, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// partition

/// The model's full exponential family over G(n, t), tabulated from its factors.
ExpFamilySpec tabulate_ermgm(const ErmgmModel& model) {
  const StateSpace space = StateSpace::multigraph(model.n(), model.t());
  const auto& fact = model.factorization();
  std::vector<double> kappa(space.size());
  std::vector<double> tau;
  tau.reserve(space.size() * model.stat_dim());
  for (std::size_t s = 0; s < space.size(); ++s) {
    const Multigraph g = space.decode(static_cast<StateIndex>(s));
    kappa[s] = fact.reconstruct_kappa(g);
    const auto t = fact.reconstruct_tau(g);
    tau.insert(tau.end(), t.begin(), t.end());
  }
  return ExpFamilySpec(space, std::move(kappa), model.stat_dim(), std::move(tau), model.eta());
}

int cmd_partition(const PartitionOptions& o, std::ostream& out, std::ostream& err) {
  const json doc = read_json_file(o.model);
  const std::string type = model_type(doc);
  json probes = json::array();
  double worst = 0.0;

  if (type == "ermgm") {
    const ErmgmModel model = ermgm_from_json(doc);
    std::optional<ExpFamilySpec> full;
    if (o.brute) full = tabulate_ermgm(model);
    for (const auto& theta : group_theta(o.theta, model.eta())) {
      const PartitionValue fast = fast_log_partition_counted(model, theta);
      const double psi = fast.value + o.inject_mismatch;
      json entry = {{"theta", theta}, {"psi", psi}, {"terms", fast.terms}};
      if (full) {
        const double brute = oracle::brute_partition(*full, theta);
        const double rel = relative_error(psi, brute);
        worst = std::max(worst, rel);
        entry["brute"] = brute;
        entry["rel_error"] = rel;
      }
      probes.push_back(std::move(entry));
    }
  } else if (type == "expfam") {
    const ExpFamilySpec family = expfam_from_json(doc);
    for (const auto& theta : group_theta(o.theta, family.eta())) {
      const double psi = log_partition(family, theta) + o.inject_mismatch;
      json entry = {{"theta", theta}, {"psi", psi}};
      if (o.brute) {
        const double brute = oracle::brute_partition(family, theta);
        const double rel = relative_error(psi, brute);
        worst = std::max(worst, rel);
        entry["brute"] = brute;
        entry["rel_error"] = rel;
      }
      probes.push_back(std::move(entry));
    }
  } else {
    const CefSpec cef = cef_from_json(doc);
    const auto thetas = group_theta(o.theta, cef.eta());
    for (const auto& theta : thetas) {
      json rows = json::array();
      json brute_rows = json::array();
      for (std::size_t a = 0; a < cef.num_rows(); ++a) {
        const double psi = row_log_partition(cef, a, theta) + o.inject_mismatch;
        rows.push_back(psi);
        if (o.brute) {
          std::vector<double> tau;
          for (std::size_t b = 0; b < cef.num_states(); ++b) {
            const auto t = cef.tau(a, b);
            tau.insert(tau.end(), t.begin(), t.end());
          }
          const ExpFamilySpec row(cef.space(), cef.kappa_row(a), cef.stat_dim(), std::move(tau), cef.eta());
          const double brute = oracle::brute_partition(row, theta);
          worst = std::max(worst, relative_error(psi, brute));
          brute_rows.push_back(brute);
        }
      }
      json entry = {{"theta", theta}, {"row_psi", rows}};
      if (o.brute) entry["brute_row_psi"] = brute_rows;
      probes.push_back(std::move(entry));
    }
    const MefCheck mef = mef_check(cef, thetas);
    probes = json{{"probes", probes}, {"mef", mef.is_mef}, {"max_row_spread", mef.max_spread}};
  }

  json result = {{"type", type}};
  if (probes.is_object()) {
    result.update(probes);
  } else {
    result["probes"] = probes;
  }
  if (o.brute) {
    result["max_rel_error"] = worst;
    result["brute_ok"] = worst <= 1e-10;
  }
  emit(result, o.out, out);
  if (o.brute && worst > 1e-10) {
    err << "brute-force mismatch: relative error " << worst << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// diagnose

int cmd_diagnose(const DiagnoseOptions& o, std::ostream& out, std::ostream& err) {
  const TrajectoryFile file = load_trajectory(o.traj);
  if (file.header.value("iid", false)) throw std::invalid_argument("diagnose expects a chain, not an iid sequence");
  const StateSpace space = header_space(file.header);
  if (!space.is_simple_graph_space()) throw std::invalid_argument("diagnose supports simple-graph trajectories");
  const std::string stat = o.stat.empty() ? header_string(file.header, "model") : o.stat;
  const int n = space.n();
  const auto N = static_cast<double>(space.num_dyads());

  std::vector<Multigraph> graphs;
  for (std::size_t s = 0; s < space.size(); ++s) graphs.push_back(space.decode(static_cast<StateIndex>(s)));
  TransitionStatistic tau;
  std::optional<FamilyKind> family_kind;
  if (stat == "density") {
    tau = [&](StateIndex a, StateIndex b, std::span<double> v) { v[0] = stat_density(graphs[a], graphs[b]); };
    family_kind = FamilyKind::identity;
  } else if (stat == "stability") {
    tau = [&](StateIndex a, StateIndex b, std::span<double> v) { v[0] = stat_stability(graphs[a], graphs[b]); };
    family_kind = FamilyKind::stability;
  } else if (stat == "transitivity") {
    tau = [&](StateIndex a, StateIndex b, std::span<double> v) { v[0] = stat_transitivity(graphs[a], graphs[b]); };
  } else {
    throw std::invalid_argument("diagnose supports --stat density, stability or transitivity");
  }

  double target = 0.0;
  if (o.target) {
    target = *o.target;
  } else if ((stat == "density" || stat == "stability") && file.header.contains("p")) {
    target = file.header.at("p").get<double>() * N / (n - 1);
  } else {
    throw std::invalid_argument("no target mean; pass --target");
  }

  std::optional<PermutationFamily> family;
  if (family_kind) family = builtin_family(*family_kind, space);
  const Trajectory x(space.size(), file.replicates.front());
  ConvergenceReport report;
  try {
    report = convergence_report(x, 1, tau, {target}, family ? &*family : nullptr);
  } catch (const ModelError& e) {
    err << "warning: " << e.what() << "\n";
    report = convergence_report(x, 1, tau, {target}, nullptr);
  }

  json result = {{"stat", stat},
                 {"transitions", x.num_transitions()},
                 {"final_mean", report.running_mean.back()},
                 {"target", report.target},
                 {"final_abs_error", report.final_abs_error}};
  if (report.stderr_estimate) {
    result["stderr"] = *report.stderr_estimate;
    result["within_3_stderr"] = report.final_abs_error[0] <= 3.0 * (*report.stderr_estimate)[0];
  } else {
    result["stderr"] = nullptr;
  }
  if (file.replicates.size() > 1) err << "note: only replicate 0 is diagnosed\n";
  if (!o.csv.empty()) {
    std::ofstream csv(o.csv);
    if (!csv) throw FormatError("cannot write '" + o.csv + "'");
    csv << "t,running_mean\n";
    for (std::size_t i = 0; i < report.running_mean.size(); ++i) {
      csv << i + 1 << ',' << json(report.running_mean[i][0]).dump() << '\n';
    }
  }
  emit(result, o.out, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// exchangeability

PermutationFamily complement_family(const StateSpace& space) {
  const auto mask = static_cast<StateIndex>(space.size() - 1);
  std::vector<Permutation> sigma(space.size(), Permutation(space.size()));
  for (auto& s : sigma) {
    for (std::size_t b = 0; b < space.size(); ++b) s[b] = static_cast<StateIndex>(~b & mask);
  }
  return PermutationFamily(std::move(sigma));
}

int cmd_exchangeability(const ExchangeabilityOptions& o, std::ostream& out, std::ostream& err) {
  const StateSpace space = StateSpace::multigraph(o.n, o.t);
  const IsoClasses classes = iso_classes(space);
  json result = {{"space", to_json(space)}, {"classes", classes.num_classes()}};
  json sizes = json::array();
  for (std::size_t c = 0; c < classes.num_classes(); ++c) sizes.push_back(classes.members(c).size());
  result["class_sizes"] = sizes;

  if (!o.stat.empty()) {
    std::vector<std::vector<double>> coordinates;
    for (std::size_t s = 0; s < space.size(); ++s) {
      const Multigraph g = space.decode(static_cast<StateIndex>(s));
      std::vector<double> h;
      if (o.stat == "edges") {
        h = {static_cast<double>(g.edge_count())};
      } else if (o.stat == "density") {
        h = {static_cast<double>(g.edge_count()) / (o.n - 1)};
      } else if (o.stat == "triangles") {
        h = {static_cast<double>(triangle_count(g))};
      } else if (o.stat == "degseq" || o.stat == "sorted-degseq") {
        const auto d = o.stat == "degseq" ? degree_sequence(g) : sorted_degree_sequence(g);
        h.assign(d.begin(), d.end());
      } else {
        throw std::invalid_argument("--stat is edges, density, triangles, degseq or sorted-degseq");
      }
      if (coordinates.empty()) coordinates.resize(h.size(), std::vector<double>(space.size()));
      for (std::size_t k = 0; k < h.size(); ++k) coordinates[k][s] = h[k];
    }
    bool exchangeable = true;
    for (const auto& h : coordinates) {
      const ExchangeabilityCheck check = is_finitely_exchangeable(h, classes, 0.0);
      if (!check) {
        exchangeable = false;
        const auto [a, b] = check.witness.value();
        result["witness"] = {to_json(space.decode(a)), to_json(space.decode(b))};
        break;
      }
    }
    result["stat"] = o.stat;
    result["exchangeable"] = exchangeable;
  } else if (!o.mu.empty()) {
    if (o.t != 1) throw std::invalid_argument("the transfer check uses simple graphs (--t 1)");
    std::vector<double> mu;
    if (o.mu == "er") {
      const Pmf er = erdos_renyi_pmf(o.n, o.p);
      mu.assign(er.values().begin(), er.values().end());
    } else if (o.mu == "concentrated") {
      // Half the mass on the single-edge graph {2, 1}, the rest uniform.
      mu.assign(space.size(), 0.5 / static_cast<double>(space.size()));
      mu[1] += 0.5;
    } else {
      throw std::invalid_argument("--mu is er or concentrated");
    }
    const Pmf common(mu);
    const PermutationFamily family =
        o.family == "complement" ? complement_family(space) : builtin_family(family_kind_from_string(o.family), space);
    std::vector<double> entries(space.size() * space.size());
    for (std::size_t a = 0; a < space.size(); ++a) {
      for (std::size_t b = 0; b < space.size(); ++b) {
        entries[a * space.size() + b] = common[family.apply(static_cast<StateIndex>(a), static_cast<StateIndex>(b))];
      }
    }
    const StochasticMatrix P(space.size(), space.size(), std::move(entries));
    const auto report = exchangeability_transfer(P, family, common, classes);
    result["mu"] = o.mu;
    result["family"] = o.family;
    result["mu_exchangeable"] = report.mu_exchangeable;
    result["every_row_exchangeable"] = report.every_row;
    result["some_row_exchangeable"] = report.some_row;
  } else {
    throw std::invalid_argument("exchangeability needs --stat or --mu");
  }
  emit(result, o.out, out);
  err << classes.num_classes() << " isomorphism classes\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sample

int cmd_sample(const SampleOptions& o, std::ostream& out, std::ostream& err) {
  const ErmgmModel model = ermgm_from_json(read_json_file(o.model));
  const auto thetas = group_theta(o.theta, model.eta());
  if (o.theta.empty() || thetas.size() != 1) throw std::invalid_argument("sample needs exactly one --theta");
  json samples = json::array();
  for (std::size_t r = 0; r < o.count; ++r) {
    const Multigraph g = sample_multigraph(model, thetas.front(), o.seed, r);
    json j = to_json(g);
    j["log_pmf"] = multigraph_log_pmf(model, thetas.front(), g).value;
    samples.push_back(std::move(j));
  }
  emit(o.count == 1 ? samples.front() : json{{"samples", samples}}, o.out, out);
  err << "sampled " << o.count << " multigraph(s)\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// --config

/// Options defined in the config file replace the same options on the command
/// line; the remaining keys become flags.
std::vector<std::string> apply_config(const std::vector<std::string>& args, const std::set<std::string>& commands) {
  std::optional<std::string> path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw std::invalid_argument("--config needs a path");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path) return rest;

  const json config = read_json_file(*path);
  if (!config.is_object()) throw FormatError("config must be a JSON object");
  std::set<std::string> keys;
  for (const auto& [key, value] : config.items()) {
    if (key != "command") keys.insert(key);
  }

  std::vector<std::string> merged;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    const std::string& token = rest[i];
    if (token.rfind("--", 0) == 0) {
      const std::string name = token.substr(2, token.find('=') == std::string::npos ? std::string::npos : token.find('=') - 2);
      if (keys.count(name) != 0) {
        while (token.find('=') == std::string::npos && i + 1 < rest.size() && rest[i + 1].rfind("--", 0) != 0 &&
               commands.count(rest[i + 1]) == 0) {
          ++i;
        }
        continue;
      }
    }
    merged.push_back(token);
  }
  const bool has_command = std::any_of(merged.begin(), merged.end(), [&](const std::string& s) { return commands.count(s) != 0; });
  if (!has_command && config.contains("command")) merged.insert(merged.begin(), config.at("command").get<std::string>());

  for (const auto& [key, value] : config.items()) {
    if (key == "command") continue;
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) merged.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& v : value) {
        merged.push_back(flag);
        merged.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      }
    } else if (value.is_string()) {
      merged.push_back(flag);
      merged.push_back(value.get<std::string>());
    } else if (value.is_number()) {
      merged.push_back(flag);
      merged.push_back(value.dump());
    } else {
      throw FormatError("config value for '" + key + "' must be a scalar or an array");
    }
  }
  return merged;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-uniform Markov chains and exponential random graph models"};
  app.name("puchain");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");
  app.add_option("--config", "JSON file whose keys override command-line options");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Sample chain trajectories to JSONL");
  simulate->add_option("--model", sim.model, "density, stability, modular or custom")
      ->required()
      ->check(CLI::IsMember({"density", "stability", "modular", "custom"}));
  simulate->add_option("--n", sim.n, "Vertices (graph models) or modulus (modular)");
  simulate->add_option("--p", sim.p, "Edge probability")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--steps", sim.steps, "Number of transitions")->required();
  simulate->add_option("--seed", sim.seed, "64-bit seed")->required();
  simulate->add_option("--x0", sim.x0, "Initial state index");
  simulate->add_option("--matrix", sim.matrix, "Transition matrix for --model custom (JSON or CSV)");
  simulate->add_option("--method", sim.method, "matrix (inverse CDF) or puniform (iid steps)");
  simulate->add_option("--out", sim.out, "Output JSONL path (default stdout)");
  simulate->add_flag("--dyads", sim.dyads, "Add the dyad expansion of each state");
  simulate->add_option("--replicates", sim.replicates, "Independent replicates");
  simulate->add_option("--jobs", sim.jobs, "Worker threads for replicates");

  DetectOptions det;
  auto* detect = app.add_subcommand("detect", "Decide p-uniformity of a transition matrix");
  detect->add_option("--matrix", det.matrix, "Matrix file (JSON or CSV)")->required();
  detect->add_flag("--normalize", det.normalize, "Divide each row by its sum first");
  detect->add_option("--tol", det.tol, "Matching tolerance");
  detect->add_option("--out", det.out, "Output JSON path");

  TransformOptions tr;
  auto* transform = app.add_subcommand("transform", "Map a chain to its iid companion, or back");
  transform->add_option("--traj", tr.traj, "Trajectory JSONL")->required();
  transform->add_option("--family", tr.family, "identity, symdiff, stability, modular or a family JSON file");
  transform->add_flag("--inverse", tr.inverse, "Rebuild the chain from an iid sequence");
  transform->add_option("--x0", tr.x0, "Initial state for --inverse");
  transform->add_option("--out", tr.out, "Output JSONL path");

  FitOptions fit;
  auto* fitc = app.add_subcommand("fit", "Closed-form p estimate for density and stability chains");
  fitc->add_option("--traj", fit.traj, "Trajectory JSONL")->required();
  fitc->add_option("--model", fit.model, "density or stability (default: from the header)");
  fitc->add_option("--out", fit.out, "Output JSON path");

  PartitionOptions part;
  auto* partition = app.add_subcommand("partition", "Log-partition values of a model file");
  partition->add_option("--model", part.model, "Model JSON (ermgm, expfam or cef)")->required();
  partition->add_option("--theta", part.theta, "Parameter values; default: built-in probes");
  partition->add_flag("--brute", part.brute, "Cross-check against exhaustive enumeration");
  partition->add_option("--inject-mismatch", part.inject_mismatch, "Add this offset before the cross-check (testing)");
  partition->add_option("--out", part.out, "Output JSON path");

  DiagnoseOptions diag;
  auto* diagnose = app.add_subcommand("diagnose", "Time-average convergence report");
  diagnose->add_option("--traj", diag.traj, "Trajectory JSONL")->required();
  diagnose->add_option("--stat", diag.stat, "density, stability or transitivity");
  diagnose->add_option("--target", diag.target, "Limit to compare against");
  diagnose->add_option("--csv", diag.csv, "Write running means as CSV");
  diagnose->add_option("--out", diag.out, "Output JSON path");

  ExchangeabilityOptions ex;
  auto* exch = app.add_subcommand("exchangeability", "Isomorphism-class checks");
  exch->add_option("--n", ex.n, "Vertices")->required()->check(CLI::Range(2, kMaxIsomorphismVertices));
  exch->add_option("--t", ex.t, "Maximum multiplicity");
  exch->add_option("--stat", ex.stat, "edges, density, triangles, degseq or sorted-degseq");
  exch->add_option("--mu", ex.mu, "er or concentrated: run the chain transfer check");
  exch->add_option("--family", ex.family, "identity, complement, symdiff or stability");
  exch->add_option("--p", ex.p, "Edge probability for --mu er")->check(CLI::Range(0.0, 1.0));
  exch->add_option("--out", ex.out, "Output JSON path");

  SampleOptions smp;
  auto* sample = app.add_subcommand("sample", "Draw multigraphs from an ERMGM");
  sample->add_option("--model", smp.model, "ERMGM JSON")->required();
  sample->add_option("--theta", smp.theta, "Parameter value")->required();
  sample->add_option("--seed", smp.seed, "64-bit seed")->required();
  sample->add_option("--count", smp.count, "Number of draws");
  sample->add_option("--out", smp.out, "Output JSON path");

  const std::set<std::string> commands{"simulate", "detect", "transform", "fit",
                                       "partition", "diagnose", "exchangeability", "sample"};
  std::vector<std::string> argv_storage{"puchain"};
  try {
    for (auto& a : apply_config(args, commands)) argv_storage.push_back(std::move(a));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  // The config has been folded in, so the option only needs to parse.
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*simulate) return cmd_simulate(sim, out, err);
    if (*detect) return cmd_detect(det, out, err);
    if (*transform) return cmd_transform(tr, out, err);
    if (*fitc) return cmd_fit(fit, out, err);
    if (*partition) return cmd_partition(part, out, err);
    if (*diagnose) return cmd_diagnose(diag, out, err);
    if (*exch) return cmd_exchangeability(ex, out, err);
    if (*sample) return cmd_sample(smp, out, err);
  } catch (const NumericalFailure& e) {
    err << "numerical check failed: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const InvariantViolation& e) {
    err << "invariant violated: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const NonConvergence& e) {
    err << "did not converge: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace puchain::cli
