// Apache License, Version 2.0, refer to LICENSE.txt
#include "puchain/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "puchain/models.hpp"

namespace puchain {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  return j.at(key);
}

int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw FormatError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

std::vector<double> number_array(const json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw FormatError(std::string(what) + " must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::vector<double>> number_rows(const json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + " must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) rows.push_back(number_array(row, what));
  return rows;
}

// Accepts a vector (l = 1) or a vector of vectors; returns the flat table and l.
std::pair<std::vector<double>, std::size_t> statistic_rows(const json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + " must be an array");
  if (j.empty() || !j.front().is_array()) return {number_array(j, what), 1};
  std::vector<double> flat;
  std::size_t l = 0;
  for (const auto& entry : j) {
    const auto v = number_array(entry, what);
    if (l == 0) l = v.size();
    if (v.size() != l || l == 0) throw FormatError(std::string(what) + " entries must share a nonzero length");
    flat.insert(flat.end(), v.begin(), v.end());
  }
  return {flat, l};
}

json statistic_to_json(std::span<const double> flat, std::size_t l) {
  json out = json::array();
  for (std::size_t i = 0; i < flat.size(); i += l) {
    if (l == 1) {
      out.push_back(flat[i]);
    } else {
      out.push_back(std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(i),
                                        flat.begin() + static_cast<std::ptrdiff_t>(i + l)));
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

json to_json(const StateSpace& space) {
  switch (space.kind()) {
    case SpaceKind::multigraph:
      return {{"kind", "multigraph"}, {"n", space.n()}, {"t", space.t()}};
    case SpaceKind::modular:
      return {{"kind", "modular"}, {"n", space.n()}};
    case SpaceKind::generic: {
      json j = {{"kind", "generic"}, {"size", space.size()}};
      if (space.has_labels()) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < space.size(); ++i) labels.push_back(space.label(static_cast<StateIndex>(i)));
        j["labels"] = labels;
      }
      return j;
    }
  }
  return {};
}

StateSpace space_from_json(const json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "multigraph") return StateSpace::multigraph(int_field(j, "n"), int_field(j, "t"));
  if (kind == "modular") return StateSpace::modular(int_field(j, "n"));
  if (kind == "generic") {
    if (j.contains("labels")) return StateSpace::generic(j.at("labels").get<std::vector<std::string>>());
    return StateSpace::generic(field(j, "size").get<std::size_t>());
  }
  throw FormatError("unknown space kind '" + kind + "'");
}

json to_json(const Multigraph& g) {
  json dyads = json::array();
  for (std::size_t f = 0; f < g.num_dyads(); ++f) {
    const Dyad d = dyad_at(f);
    if (g[f] != 0) dyads.push_back({d.u + 1, d.v + 1, g[f]});
  }
  return {{"n", g.n()}, {"t", g.t()}, {"dyads", dyads}};
}

Multigraph multigraph_from_json(const json& j) {
  const int n = int_field(j, "n");
  const int t = int_field(j, "t");
  Multigraph g(n, t);
  std::set<std::size_t> seen;
  for (const auto& entry : field(j, "dyads")) {
    if (!entry.is_array() || entry.size() != 3) throw FormatError("each dyad must be [u, v, multiplicity]");
    const int u = entry[0].get<int>();
    const int v = entry[1].get<int>();
    if (u < 1 || v < 1 || u > n || v > n || u == v) throw FormatError("dyad vertices must be distinct and in 1..n");
    const std::size_t f = dyad_index(u - 1, v - 1);
    if (!seen.insert(f).second) throw FormatError("dyad listed twice");
    g.set(f, entry[2].get<int>());
  }
  return g;
}

json to_json(const PermutationFamily& family) {
  return {{"kind", to_string(family.kind())}, {"sigma", family.members()}};
}

PermutationFamily family_from_json(const json& j, const StateSpace* space) {
  if (j.contains("sigma")) {
    auto sigma = j.at("sigma").get<std::vector<Permutation>>();
    return PermutationFamily(std::move(sigma));
  }
  const FamilyKind kind = family_kind_from_string(field(j, "kind").get<std::string>());
  if (j.contains("space")) return builtin_family(kind, space_from_json(j.at("space")));
  if (space == nullptr) throw FormatError("a named family needs a state space");
  return builtin_family(kind, *space);
}

json to_json(const StochasticMatrix& P) {
  json rows = json::array();
  for (std::size_t a = 0; a < P.rows(); ++a) rows.push_back(std::vector<double>(P.row(a).begin(), P.row(a).end()));
  return {{"matrix", rows}};
}

StochasticMatrix matrix_from_json(const json& j) {
  const bool normalize = j.is_object() && j.value("normalize", false);
  const auto rows = number_rows(j.is_object() ? field(j, "matrix") : j, "matrix");
  return normalize ? StochasticMatrix::normalized_rows(rows) : StochasticMatrix::from_rows(rows);
}

StochasticMatrix matrix_from_csv(std::string_view text, bool normalize) {
  std::vector<std::vector<double>> rows;
  std::istringstream lines{std::string(text)};
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw FormatError("bad CSV cell '" + cell + "'");
      } catch (const std::logic_error&) {
        throw FormatError("bad CSV cell '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw FormatError("CSV rows have different lengths");
    rows.push_back(std::move(row));
  }
  return normalize ? StochasticMatrix::normalized_rows(rows) : StochasticMatrix::from_rows(rows);
}

std::string matrix_to_csv(const StochasticMatrix& P) {
  std::string out;
  for (std::size_t a = 0; a < P.rows(); ++a) {
    for (std::size_t b = 0; b < P.cols(); ++b) {
      if (b > 0) out += ',';
      out += json(P(a, b)).dump();
    }
    out += '\n';
  }
  return out;
}

json to_json(const Pmf& pmf) { return std::vector<double>(pmf.values().begin(), pmf.values().end()); }

json to_json(const PuniformWitness& witness) {
  return {{"puniform", true},
          {"reference_state", witness.reference_state()},
          {"common_row", to_json(witness.common_row())},
          {"sigma", witness.family().members()}};
}

// ---------------------------------------------------------------------------

json to_json(const ParameterMap& eta) {
  switch (eta.kind()) {
    case EtaKind::natural:
      return {{"kind", "natural"}, {"dim", eta.param_dim()}};
    case EtaKind::scalar_log:
      return {{"kind", "scalar_log"}};
    case EtaKind::density_logit:
      return {{"kind", "density_logit"}, {"n", eta.vertex_count()}};
    case EtaKind::table: {
      json samples = json::array();
      for (const auto& [theta, value] : eta.samples()) samples.push_back({{"theta", theta}, {"eta", value}});
      return {{"kind", "table"}, {"samples", samples}};
    }
  }
  return {};
}

ParameterMap parameter_map_from_json(const json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "natural") return ParameterMap::natural(j.value("dim", std::size_t{1}));
  if (kind == "scalar_log") return ParameterMap::scalar_log();
  if (kind == "density_logit") return ParameterMap::density_logit(int_field(j, "n"));
  if (kind == "table") {
    std::vector<std::pair<ParamVector, ParamVector>> samples;
    for (const auto& s : field(j, "samples")) {
      samples.emplace_back(number_array(field(s, "theta"), "theta"), number_array(field(s, "eta"), "eta"));
    }
    return ParameterMap::table(std::move(samples));
  }
  throw FormatError("unknown eta kind '" + kind + "'");
}

json to_json(const CefSpec& cef) {
  const std::size_t n = cef.num_states();
  json tau = json::array();
  json kappa = json::array();
  for (std::size_t a = 0; a < cef.num_rows(); ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < n; ++b) {
      const auto t = cef.tau(a, b);
      if (cef.stat_dim() == 1) {
        row.push_back(t[0]);
      } else {
        row.push_back(std::vector<double>(t.begin(), t.end()));
      }
    }
    tau.push_back(std::move(row));
    kappa.push_back(cef.kappa_row(a));
  }
  json out = {{"type", "cef"}, {"space", to_json(cef.space())}, {"tau", tau}, {"eta", to_json(cef.eta())}};
  if (!cef.unit_kappa()) out["kappa"] = kappa;
  return out;
}

CefSpec cef_from_json(const json& j) {
  const json& tau_rows = field(j, "tau");
  if (!tau_rows.is_array() || tau_rows.empty()) throw FormatError("tau must be a non-empty array of rows");
  std::vector<double> tau;
  std::size_t l = 0;
  std::size_t cols = 0;
  for (const auto& row : tau_rows) {
    auto [flat, dim] = statistic_rows(row, "tau");
    const std::size_t row_cols = flat.size() / dim;
    if (l == 0) {
      l = dim;
      cols = row_cols;
    }
    if (dim != l || row_cols != cols) throw FormatError("tau rows must share their shape");
    tau.insert(tau.end(), flat.begin(), flat.end());
  }
  const StateSpace space = j.contains("space") ? space_from_json(j.at("space")) : StateSpace::generic(cols);
  if (space.size() != cols) throw FormatError("tau rows do not match the space size");
  std::vector<double> kappa;
  if (j.contains("kappa")) {
    for (const auto& row : number_rows(j.at("kappa"), "kappa")) {
      if (row.size() != cols) throw FormatError("kappa rows do not match the space size");
      kappa.insert(kappa.end(), row.begin(), row.end());
    }
  }
  return CefSpec(space, tau_rows.size(), std::move(kappa), l, std::move(tau),
                 parameter_map_from_json(field(j, "eta")));
}

json to_json(const ExpFamilySpec& family) {
  return {{"type", "expfam"},
          {"space", to_json(family.space())},
          {"kappa", std::vector<double>(family.kappa().begin(), family.kappa().end())},
          {"tau", statistic_to_json(family.tau_table(), family.stat_dim())},
          {"eta", to_json(family.eta())}};
}

ExpFamilySpec expfam_from_json(const json& j) {
  auto [tau, l] = statistic_rows(field(j, "tau"), "tau");
  const std::size_t size = tau.size() / l;
  const StateSpace space = j.contains("space") ? space_from_json(j.at("space")) : StateSpace::generic(size);
  std::vector<double> kappa = j.contains("kappa") ? number_array(j.at("kappa"), "kappa") : std::vector<double>(size, 1.0);
  return ExpFamilySpec(space, std::move(kappa), l, std::move(tau), parameter_map_from_json(field(j, "eta")));
}

// ---------------------------------------------------------------------------

json to_json(const DyadicFactorization& fact) {
  json dyads = json::array();
  for (std::size_t f = 0; f < fact.num_dyads(); ++f) {
    const Dyad d = dyad_at(f);
    json entry = {{"dyad", {d.u + 1, d.v + 1}}};
    if (fact.has_tau()) {
      std::vector<double> flat;
      for (int m = 0; m <= fact.t(); ++m) {
        const auto t = fact.tau(f, m);
        flat.insert(flat.end(), t.begin(), t.end());
      }
      entry["tau"] = statistic_to_json(flat, fact.stat_dim());
    }
    if (fact.has_kappa()) {
      std::vector<double> k;
      for (int m = 0; m <= fact.t(); ++m) k.push_back(fact.kappa(f, m));
      entry["kappa"] = k;
    }
    dyads.push_back(std::move(entry));
  }
  return {{"n", fact.n()}, {"t", fact.t()}, {"stat_dim", fact.stat_dim()}, {"dyads", dyads}};
}

json to_json(const ErmgmModel& model) {
  json out = to_json(model.factorization());
  out["type"] = "ermgm";
  out["eta"] = to_json(model.eta());
  return out;
}

ErmgmModel ermgm_from_json(const json& j) {
  const int n = int_field(j, "n");
  const int t = int_field(j, "t");
  ParameterMap eta = parameter_map_from_json(field(j, "eta"));
  if (j.contains("model")) {
    const std::string name = j.at("model").get<std::string>();
    if (name != "erdos_renyi") throw FormatError("unknown named model '" + name + "'");
    return erdos_renyi_ermgm(n, t, std::move(eta));
  }
  const auto cells = static_cast<std::size_t>(t + 1);
  if (j.contains("tau_f")) {
    auto [tau, l] = statistic_rows(j.at("tau_f"), "tau_f");
    if (tau.size() != cells * l) throw FormatError("tau_f must have t+1 entries");
    const std::vector<double> kappa =
        j.contains("kappa_f") ? number_array(j.at("kappa_f"), "kappa_f") : std::vector<double>(cells, 1.0);
    return ErmgmModel(DyadicFactorization::homogeneous(n, t, l, tau, kappa), std::move(eta));
  }
  const json& dyads = field(j, "dyads");
  if (!dyads.is_array() || dyads.size() != num_dyads(n)) throw FormatError("dyads must list every dyad in order");
  std::vector<double> tau;
  std::vector<double> kappa;
  std::size_t l = 0;
  for (const auto& entry : dyads) {
    auto [flat, dim] = statistic_rows(field(entry, "tau"), "tau");
    if (l == 0) l = dim;
    if (dim != l || flat.size() != cells * l) throw FormatError("per-dyad tau must be (t+1) x l");
    tau.insert(tau.end(), flat.begin(), flat.end());
    const auto k = entry.contains("kappa") ? number_array(entry.at("kappa"), "kappa") : std::vector<double>(cells, 1.0);
    if (k.size() != cells) throw FormatError("per-dyad kappa must have t+1 entries");
    kappa.insert(kappa.end(), k.begin(), k.end());
  }
  return ErmgmModel(DyadicFactorization(n, t, l, std::move(tau), std::move(kappa)), std::move(eta));
}

std::string model_type(const json& j) {
  if (!j.is_object()) throw FormatError("a model must be a JSON object");
  if (j.contains("type")) {
    const auto type = j.at("type").get<std::string>();
    if (type != "ermgm" && type != "cef" && type != "expfam") throw FormatError("unknown model type '" + type + "'");
    return type;
  }
  if (j.contains("tau_f") || j.contains("dyads") || j.contains("model")) return "ermgm";
  const json& tau = field(j, "tau");
  if (tau.is_array() && !tau.empty() && tau.front().is_array() && !tau.front().empty() &&
      tau.front().front().is_array()) {
    return "cef";
  }
  return "expfam";
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace puchain
