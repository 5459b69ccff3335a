// Apache License, Version 2.0, refer to LICENSE.txt
#include "puchain/netstat.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "puchain/puniform.hpp"
#include "puchain/random.hpp"

namespace puchain {

namespace {

void require_simple(const Multigraph& g, const char* what) {
  if (g.t() != 1) throw std::invalid_argument(std::string(what) + " needs simple graphs (t = 1)");
}

void require_same_n(const Multigraph& a, const Multigraph& b) {
  if (a.n() != b.n()) throw std::invalid_argument("graphs have different vertex counts");
}

}  // namespace

Multigraph complement(const Multigraph& g) {
  require_simple(g, "complement");
  std::vector<int> m(g.multiplicities().begin(), g.multiplicities().end());
  for (int& x : m) x = 1 - x;
  return Multigraph(g.n(), 1, std::move(m));
}

Multigraph symmetric_difference(const Multigraph& a, const Multigraph& b) {
  require_simple(a, "symmetric difference");
  require_simple(b, "symmetric difference");
  require_same_n(a, b);
  std::vector<int> m(a.num_dyads());
  for (std::size_t f = 0; f < m.size(); ++f) m[f] = a[f] ^ b[f];
  return Multigraph(a.n(), 1, std::move(m));
}

double stat_density(const Multigraph& a, const Multigraph& b) {
  require_simple(a, "density");
  require_simple(b, "density");
  require_same_n(a, b);
  return static_cast<double>(b.edge_count()) / (b.n() - 1);
}

double stat_stability(const Multigraph& a, const Multigraph& b) {
  require_simple(a, "stability");
  require_simple(b, "stability");
  require_same_n(a, b);
  int agree = 0;
  for (std::size_t f = 0; f < a.num_dyads(); ++f) agree += a[f] == b[f] ? 1 : 0;
  return static_cast<double>(agree) / (a.n() - 1);
}

int two_path_count(const Multigraph& a) {
  require_simple(a, "transitivity");
  const int n = a.n();
  int count = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (a.at(i, j) == 0) continue;
      for (int k = j + 1; k < n; ++k) count += a.at(j, k);
    }
  }
  return count;
}

double stat_transitivity(const Multigraph& a, const Multigraph& b) {
  require_simple(a, "transitivity");
  require_simple(b, "transitivity");
  require_same_n(a, b);
  const int n = a.n();
  int paths = 0;
  int closed = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (a.at(i, j) == 0) continue;
      for (int k = j + 1; k < n; ++k) {
        if (a.at(j, k) == 0) continue;
        ++paths;
        closed += b.at(i, k);
      }
    }
  }
  return paths == 0 ? 0.0 : static_cast<double>(n) * closed / paths;
}

int triangle_count(const Multigraph& g) {
  require_simple(g, "triangle count");
  const int n = g.n();
  int count = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) count += g.at(i, j) * g.at(j, k) * g.at(i, k);
    }
  }
  return count;
}

std::vector<int> degree_sequence(const Multigraph& g) {
  std::vector<int> degrees(static_cast<std::size_t>(g.n()), 0);
  for (std::size_t f = 0; f < g.num_dyads(); ++f) {
    const Dyad d = dyad_at(f);
    degrees[static_cast<std::size_t>(d.u)] += g[f];
    degrees[static_cast<std::size_t>(d.v)] += g[f];
  }
  return degrees;
}

std::vector<int> sorted_degree_sequence(const Multigraph& g) {
  auto degrees = degree_sequence(g);
  std::sort(degrees.begin(), degrees.end(), std::greater<>());
  return degrees;
}

// ---------------------------------------------------------------------------
// DirectedGraph

DirectedGraph::DirectedGraph(int n) : DirectedGraph(n, std::vector<std::uint8_t>(static_cast<std::size_t>(n * n), 0)) {}

DirectedGraph::DirectedGraph(int n, std::vector<std::uint8_t> adjacency) : n_(n), adj_(std::move(adjacency)) {
  if (n < 1) throw std::invalid_argument("directed graph needs at least one vertex");
  if (adj_.size() != static_cast<std::size_t>(n * n)) throw std::invalid_argument("adjacency must be n x n");
  for (int i = 0; i < n; ++i) {
    if (adj_[static_cast<std::size_t>(i * n + i)] != 0) throw std::invalid_argument("self-loops are not allowed");
  }
  for (auto& x : adj_) x = x != 0 ? 1 : 0;
}

DirectedGraph DirectedGraph::from_code(int n, std::uint64_t code) {
  if (num_arcs(n) > 63) throw std::invalid_argument("too many arcs for a 64-bit code");
  DirectedGraph g(n);
  std::size_t bit = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      g.adj_[static_cast<std::size_t>(i * n + j)] = static_cast<std::uint8_t>((code >> bit) & 1u);
      ++bit;
    }
  }
  return g;
}

void DirectedGraph::set(int i, int j, bool on) {
  if (i == j) throw std::invalid_argument("self-loops are not allowed");
  adj_.at(static_cast<std::size_t>(i * n_ + j)) = on ? 1 : 0;
}

int DirectedGraph::arc_count() const { return std::accumulate(adj_.begin(), adj_.end(), 0); }

std::uint64_t DirectedGraph::code() const {
  std::uint64_t code = 0;
  std::size_t bit = 0;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (i == j) continue;
      if ((*this)(i, j)) code |= std::uint64_t{1} << bit;
      ++bit;
    }
  }
  return code;
}

double stat_reciprocity(const DirectedGraph& a, const DirectedGraph& b) {
  if (a.n() != b.n()) throw std::invalid_argument("graphs have different vertex counts");
  const int n = a.n();
  int arcs = 0;
  int reciprocated = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || !a(i, j)) continue;
      ++arcs;
      reciprocated += b(j, i) ? 1 : 0;
    }
  }
  return arcs == 0 ? 0.0 : static_cast<double>(n) * reciprocated / arcs;
}

// ---------------------------------------------------------------------------
// DyadicFactorization

DyadicFactorization::DyadicFactorization(int n, int t, std::size_t stat_dim, std::vector<double> tau,
                                         std::vector<double> kappa)
    : n_(n), t_(t), num_dyads_(puchain::num_dyads(n)), stat_dim_(stat_dim), tau_(std::move(tau)),
      kappa_(std::move(kappa)) {
  if (n < 2 || t < 1) throw std::invalid_argument("factorization needs n >= 2 and t >= 1");
  const std::size_t cells = num_dyads_ * static_cast<std::size_t>(t + 1);
  if (!tau_.empty() && (stat_dim_ == 0 || tau_.size() != cells * stat_dim_)) {
    throw std::invalid_argument("tau_f table must be N x (t+1) x l");
  }
  if (!kappa_.empty() && kappa_.size() != cells) throw std::invalid_argument("kappa_f table must be N x (t+1)");
  for (double k : kappa_) {
    if (!(k >= 0.0) || !std::isfinite(k)) throw std::invalid_argument("kappa_f must be finite and nonnegative");
  }
}

DyadicFactorization DyadicFactorization::homogeneous(int n, int t, std::size_t stat_dim,
                                                     std::span<const double> tau_per_m,
                                                     std::span<const double> kappa_per_m) {
  const std::size_t N = puchain::num_dyads(n);
  std::vector<double> tau;
  std::vector<double> kappa;
  if (!tau_per_m.empty()) {
    if (tau_per_m.size() != static_cast<std::size_t>(t + 1) * stat_dim) {
      throw std::invalid_argument("per-dyad tau table must be (t+1) x l");
    }
    for (std::size_t f = 0; f < N; ++f) tau.insert(tau.end(), tau_per_m.begin(), tau_per_m.end());
  }
  if (!kappa_per_m.empty()) {
    if (kappa_per_m.size() != static_cast<std::size_t>(t + 1)) {
      throw std::invalid_argument("per-dyad kappa table must have t+1 entries");
    }
    for (std::size_t f = 0; f < N; ++f) kappa.insert(kappa.end(), kappa_per_m.begin(), kappa_per_m.end());
  }
  return DyadicFactorization(n, t, stat_dim, std::move(tau), std::move(kappa));
}

std::vector<double> DyadicFactorization::reconstruct_tau(const Multigraph& g) const {
  if (!has_tau()) throw std::logic_error("factorization has no tau part");
  if (g.n() != n_ || g.t() > t_) throw std::invalid_argument("graph does not match the factorization");
  std::vector<double> total(stat_dim_, 0.0);
  for (std::size_t f = 0; f < num_dyads_; ++f) {
    const auto part = tau(f, g[f]);
    for (std::size_t k = 0; k < stat_dim_; ++k) total[k] += part[k];
  }
  return total;
}

double DyadicFactorization::reconstruct_kappa(const Multigraph& g) const {
  if (!has_kappa()) throw std::logic_error("factorization has no kappa part");
  if (g.n() != n_ || g.t() > t_) throw std::invalid_argument("graph does not match the factorization");
  double product = 1.0;
  for (std::size_t f = 0; f < num_dyads_; ++f) product *= kappa(f, g[f]);
  return product;
}

namespace {

// Calls check(g) on every state, or on random probes for large spaces, until it
// returns false. Returns the failing state, if any.
template <class Check>
std::optional<Multigraph> verify_states(const StateSpace& space, const FactorizationOptions& options,
                                        std::size_t& checked, Check&& check) {
  checked = 0;
  if (space.size() <= options.exhaustive_limit) {
    for (std::size_t s = 0; s < space.size(); ++s) {
      const Multigraph g = space.decode(static_cast<StateIndex>(s));
      ++checked;
      if (!check(g)) return g;
    }
    return std::nullopt;
  }
  for (std::size_t i = 0; i < options.random_probes; ++i) {
    const double u = counter_uniform(options.seed, 0, i);
    const auto s = std::min(space.size() - 1, static_cast<std::size_t>(u * static_cast<double>(space.size())));
    const Multigraph g = space.decode(static_cast<StateIndex>(s));
    ++checked;
    if (!check(g)) return g;
  }
  return std::nullopt;
}

bool close(double x, double y, double tol) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(y)); }

}  // namespace

FactorizationResult factor_dyadditive(const StateSpace& space, std::size_t stat_dim, const GraphStatistic& tau,
                                      const FactorizationOptions& options) {
  if (space.kind() != SpaceKind::multigraph) throw std::invalid_argument("dyadic factorization needs a multigraph space");
  const int n = space.n();
  const int t = space.t();
  const std::size_t N = space.num_dyads();

  const Multigraph empty(n, t);
  const auto base = tau(empty);
  if (base.size() != stat_dim) throw std::invalid_argument("statistic has the wrong dimension");

  std::vector<double> table(N * static_cast<std::size_t>(t + 1) * stat_dim);
  for (std::size_t f = 0; f < N; ++f) {
    for (int m = 0; m <= t; ++m) {
      Multigraph g = empty;
      g.set(f, m);
      const auto value = tau(g);
      for (std::size_t k = 0; k < stat_dim; ++k) {
        table[(f * static_cast<std::size_t>(t + 1) + static_cast<std::size_t>(m)) * stat_dim + k] =
            value[k] - base[k] + base[k] / static_cast<double>(N);
      }
    }
  }
  DyadicFactorization candidate(n, t, stat_dim, std::move(table), {});

  FactorizationResult result;
  result.witness = verify_states(space, options, result.states_checked, [&](const Multigraph& g) {
    const auto expected = tau(g);
    const auto rebuilt = candidate.reconstruct_tau(g);
    for (std::size_t k = 0; k < stat_dim; ++k) {
      if (!close(rebuilt[k], expected[k], options.tol)) return false;
    }
    return true;
  });
  if (!result.witness) result.factorization = std::move(candidate);
  return result;
}

FactorizationResult factor_dyadically_multiplicative(const StateSpace& space, const GraphCarrier& kappa,
                                                     const FactorizationOptions& options) {
  if (space.kind() != SpaceKind::multigraph) throw std::invalid_argument("dyadic factorization needs a multigraph space");
  const int n = space.n();
  const int t = space.t();
  const std::size_t N = space.num_dyads();

  // Base point: the empty graph unless its carrier vanishes.
  std::optional<Multigraph> base;
  Multigraph empty(n, t);
  if (kappa(empty) > 0.0) {
    base = empty;
  } else {
    for (std::size_t s = 0; s < space.size() && !base; ++s) {
      Multigraph g = space.decode(static_cast<StateIndex>(s));
      if (kappa(g) > 0.0) base = std::move(g);
    }
  }

  std::vector<double> table(N * static_cast<std::size_t>(t + 1), 0.0);
  if (base) {
    const double base_value = kappa(*base);
    const double share = std::exp(std::log(base_value) / static_cast<double>(N));
    for (std::size_t f = 0; f < N; ++f) {
      for (int m = 0; m <= t; ++m) {
        Multigraph g = *base;
        g.set(f, m);
        table[f * static_cast<std::size_t>(t + 1) + static_cast<std::size_t>(m)] = kappa(g) / base_value * share;
      }
    }
  }
  // With no positive state the all-zero table reproduces kappa == 0.
  DyadicFactorization candidate(n, t, 1, {}, std::move(table));

  FactorizationResult result;
  result.witness = verify_states(space, options, result.states_checked, [&](const Multigraph& g) {
    return close(candidate.reconstruct_kappa(g), kappa(g), options.tol);
  });
  if (!result.witness) result.factorization = std::move(candidate);
  return result;
}

Multigraph multigraph_union(std::span<const Multigraph> parts) {
  if (parts.empty()) throw std::invalid_argument("union of no multigraphs");
  const int n = parts.front().n();
  const int s = parts.front().t();
  std::vector<int> sum(parts.front().num_dyads(), 0);
  for (const auto& z : parts) {
    if (z.n() != n || z.t() != s) throw std::invalid_argument("union parts must share n and t");
    for (std::size_t f = 0; f < sum.size(); ++f) sum[f] += z[f];
  }
  return Multigraph(n, s * static_cast<int>(parts.size()), std::move(sum));
}

// ---------------------------------------------------------------------------
// Isomorphism classes

IsoClasses::IsoClasses(std::vector<std::size_t> class_of, std::vector<std::vector<StateIndex>> members)
    : class_of_(std::move(class_of)), members_(std::move(members)) {}

namespace {

// For each vertex bijection phi, the dyad map f -> index of {phi(u), phi(v)}.
std::vector<std::vector<std::size_t>> dyad_maps(int n) {
  std::vector<int> phi(static_cast<std::size_t>(n));
  std::iota(phi.begin(), phi.end(), 0);
  const std::size_t N = num_dyads(n);
  std::vector<std::vector<std::size_t>> maps;
  do {
    std::vector<std::size_t> map(N);
    for (std::size_t f = 0; f < N; ++f) {
      const Dyad d = dyad_at(f);
      map[f] = dyad_index(phi[static_cast<std::size_t>(d.u)], phi[static_cast<std::size_t>(d.v)]);
    }
    maps.push_back(std::move(map));
  } while (std::next_permutation(phi.begin(), phi.end()));
  return maps;
}

}  // namespace

IsoClasses iso_classes(const StateSpace& space) {
  if (space.kind() != SpaceKind::multigraph) throw std::invalid_argument("iso_classes needs a multigraph space");
  if (space.n() > kMaxIsomorphismVertices) {
    throw std::invalid_argument("iso_classes is limited to n <= " + std::to_string(kMaxIsomorphismVertices));
  }
  const auto maps = dyad_maps(space.n());
  constexpr auto unassigned = static_cast<std::size_t>(-1);
  std::vector<std::size_t> class_of(space.size(), unassigned);
  std::vector<std::vector<StateIndex>> members;

  for (std::size_t s = 0; s < space.size(); ++s) {
    if (class_of[s] != unassigned) continue;
    const std::size_t id = members.size();
    members.emplace_back();
    const Multigraph g = space.decode(static_cast<StateIndex>(s));
    std::vector<int> image(g.num_dyads());
    for (const auto& map : maps) {
      for (std::size_t f = 0; f < image.size(); ++f) image[map[f]] = g[f];
      const StateIndex h = space.encode(Multigraph(g.n(), g.t(), image));
      if (class_of[h] == unassigned) {
        class_of[h] = id;
        members[id].push_back(h);
      }
    }
    std::sort(members[id].begin(), members[id].end());
  }
  return IsoClasses(std::move(class_of), std::move(members));
}

bool are_isomorphic(const Multigraph& a, const Multigraph& b) {
  if (a.n() != b.n()) return false;
  if (a.n() > kMaxIsomorphismVertices) throw std::invalid_argument("are_isomorphic is limited to n <= 8");
  if (sorted_degree_sequence(a) != sorted_degree_sequence(b)) return false;
  for (const auto& map : dyad_maps(a.n())) {
    bool match = true;
    for (std::size_t f = 0; f < a.num_dyads() && match; ++f) match = b[map[f]] == a[f];
    if (match) return true;
  }
  return false;
}

ExchangeabilityCheck is_finitely_exchangeable(std::span<const double> h, const IsoClasses& classes, double tol) {
  if (h.size() != classes.num_states()) throw std::invalid_argument("function and classes sizes differ");
  for (std::size_t c = 0; c < classes.num_classes(); ++c) {
    const auto& members = classes.members(c);
    const double reference = h[members.front()];
    for (StateIndex s : members) {
      if (std::abs(h[s] - reference) > tol) return {false, std::make_pair(members.front(), s)};
    }
  }
  return {true, std::nullopt};
}

RelationInvarianceCheck is_relation_invariant(const PermutationFamily& family, const IsoClasses& classes) {
  if (family.size() != classes.num_states()) throw std::invalid_argument("family and classes sizes differ");
  // By transitivity of ~ it suffices to compare each state with its class representative.
  for (std::size_t a = 0; a < family.size(); ++a) {
    const auto sa = static_cast<StateIndex>(a);
    for (std::size_t b = 0; b < family.size(); ++b) {
      const auto sb = static_cast<StateIndex>(b);
      const StateIndex rep = classes.representative(classes.class_of(sb));
      if (classes.class_of(family.apply(sa, sb)) != classes.class_of(family.apply(sa, rep))) {
        return {false, std::array<StateIndex, 3>{sa, rep, sb}};
      }
    }
  }
  return {true, std::nullopt};
}

ExchangeabilityTransferReport exchangeability_transfer(const StochasticMatrix& P, const PermutationFamily& family,
                                                       const Pmf& mu, const IsoClasses& classes, double tol) {
  PuniformWitness witness(P, family, mu, 0, std::max(tol, 1e-10));
  if (!is_relation_invariant(family, classes)) {
    throw std::invalid_argument("family does not preserve isomorphism classes; the transfer does not apply");
  }
  ExchangeabilityTransferReport report{};
  report.mu_exchangeable = is_finitely_exchangeable(mu.values(), classes, tol).exchangeable;
  report.every_row = true;
  report.some_row = false;
  for (std::size_t a = 0; a < P.size(); ++a) {
    const bool ok = is_finitely_exchangeable(P.row(a), classes, tol).exchangeable;
    report.row_exchangeable.push_back(ok);
    report.every_row = report.every_row && ok;
    report.some_row = report.some_row || ok;
  }
  if (report.mu_exchangeable != report.every_row || report.every_row != report.some_row) {
    throw InvariantViolation("exchangeability of mu, every row and some row disagree");
  }
  return report;
}

}  // namespace puchain
