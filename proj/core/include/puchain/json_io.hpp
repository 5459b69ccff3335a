// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <string_view>

#include "puchain/ermgm.hpp"
#include "puchain/expfam.hpp"
#include "puchain/matrix.hpp"
#include "puchain/netstat.hpp"
#include "puchain/permutation.hpp"
#include "puchain/puniform.hpp"
#include "puchain/state_space.hpp"

namespace puchain {

using nlohmann::json;

/// A document that parses but does not match the expected schema.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"kind": "multigraph", "n": 3, "t": 1} | {"kind": "modular", "n": 3}
// | {"kind": "generic", "size": 4} | {"kind": "generic", "labels": [...]}
json to_json(const StateSpace& space);
StateSpace space_from_json(const json& j);

// {"n": 3, "t": 1, "dyads": [[u, v, m], ...]}, vertices 1-based with u > v.
// Dyads not listed have multiplicity 0.
json to_json(const Multigraph& g);
Multigraph multigraph_from_json(const json& j);

// {"sigma": [[...], ...]} or {"kind": "stability"} (a named family needs `space`).
json to_json(const PermutationFamily& family);
PermutationFamily family_from_json(const json& j, const StateSpace* space = nullptr);

// {"matrix": [[...], ...], "normalize": false} or a bare array of rows.
// With "normalize": true each row is divided by its sum.
json to_json(const StochasticMatrix& P);
StochasticMatrix matrix_from_json(const json& j);
/// Dense row-major CSV, one row per line.
StochasticMatrix matrix_from_csv(std::string_view text, bool normalize = false);
std::string matrix_to_csv(const StochasticMatrix& P);

json to_json(const Pmf& pmf);
json to_json(const PuniformWitness& witness);

// {"kind": "natural", "dim": 1} | {"kind": "scalar_log"} | {"kind": "density_logit", "n": 4}
// | {"kind": "table", "samples": [{"theta": [...], "eta": [...]}, ...]}
json to_json(const ParameterMap& eta);
ParameterMap parameter_map_from_json(const json& j);

// {"type": "cef", "space": {...}, "kappa": [[...]], "tau": [[[...]]], "eta": {...}}
// kappa is optional (ones); tau may be [[...]] when l = 1; space defaults to a
// generic space sized by the columns.
json to_json(const CefSpec& cef);
CefSpec cef_from_json(const json& j);

// {"type": "expfam", "space": {...}, "kappa": [...], "tau": [[...]] or [...], "eta": {...}}
json to_json(const ExpFamilySpec& family);
ExpFamilySpec expfam_from_json(const json& j);

// {"type": "ermgm", "n": 3, "t": 1, "eta": {...}, "tau_f": [[...] per m], "kappa_f": [...]}
// (the same tables on every dyad), or "dyads": [{"tau": ..., "kappa": ...}, ...],
// or {"model": "erdos_renyi", "n": 3, "t": 1, "eta": {...}}.
json to_json(const DyadicFactorization& fact);
json to_json(const ErmgmModel& model);
ErmgmModel ermgm_from_json(const json& j);

/// "ermgm", "cef" or "expfam", from "type" or inferred from the keys.
std::string model_type(const json& j);

json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);

}  // namespace puchain
