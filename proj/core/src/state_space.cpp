// Apache License, Version 2.0, refer to LICENSE.txt
#include "puchain/state_space.hpp"

#include <cmath>
#include <numeric>

namespace puchain {

std::size_t num_dyads(int n) {
  if (n < 0) throw std::invalid_argument("negative vertex count");
  return static_cast<std::size_t>(n) * static_cast<std::size_t>(n > 0 ? n - 1 : 0) / 2;
}

std::size_t dyad_index(int u, int v) {
  if (u == v || u < 0 || v < 0) throw std::invalid_argument("dyad needs two distinct vertices");
  if (u < v) std::swap(u, v);
  return static_cast<std::size_t>(u) * static_cast<std::size_t>(u - 1) / 2 + static_cast<std::size_t>(v);
}

Dyad dyad_at(std::size_t f) {
  // Largest u with u(u-1)/2 <= f.
  auto u = static_cast<int>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(f))) / 2.0);
  while (static_cast<std::size_t>(u) * static_cast<std::size_t>(u - 1) / 2 > f) --u;
  while (static_cast<std::size_t>(u + 1) * static_cast<std::size_t>(u) / 2 <= f) ++u;
  int v = static_cast<int>(f - static_cast<std::size_t>(u) * static_cast<std::size_t>(u - 1) / 2);
  return {u, v};
}

Multigraph::Multigraph(int n, int t) : Multigraph(n, t, std::vector<int>(puchain::num_dyads(n), 0)) {}

Multigraph::Multigraph(int n, int t, std::vector<int> multiplicities)
    : n_(n), t_(t), m_(std::move(multiplicities)) {
  if (n < 1) throw std::invalid_argument("multigraph needs at least one vertex");
  if (t < 1) throw std::invalid_argument("multigraph needs t >= 1");
  if (m_.size() != puchain::num_dyads(n)) throw std::invalid_argument("multiplicity vector has wrong length");
  for (int m : m_) {
    if (m < 0 || m > t) throw std::invalid_argument("multiplicity outside [0, t]");
  }
}

int Multigraph::at(int u, int v) const {
  if (u == v) return 0;
  return m_[dyad_index(u, v)];
}

void Multigraph::set(std::size_t f, int multiplicity) {
  if (multiplicity < 0 || multiplicity > t_) throw std::invalid_argument("multiplicity outside [0, t]");
  m_.at(f) = multiplicity;
}

int Multigraph::edge_count() const { return std::accumulate(m_.begin(), m_.end(), 0); }

StateSpace::StateSpace(SpaceKind kind, std::size_t size, int n, int t, std::vector<std::string> labels)
    : kind_(kind), size_(size), n_(n), t_(t), labels_(std::move(labels)) {}

StateSpace StateSpace::multigraph(int n, int t, std::size_t cap) {
  if (n < 1) throw std::invalid_argument("multigraph space needs n >= 1");
  if (t < 1) throw std::invalid_argument("multigraph space needs t >= 1");
  std::size_t size = 1;
  const std::size_t dyads = puchain::num_dyads(n);
  for (std::size_t f = 0; f < dyads; ++f) {
    if (size > cap / static_cast<std::size_t>(t + 1)) {
      throw SpaceTooLarge("space too large to enumerate: (" + std::to_string(t + 1) + ")^" +
                          std::to_string(dyads) + " exceeds cap " + std::to_string(cap));
    }
    size *= static_cast<std::size_t>(t + 1);
  }
  if (size > cap) throw SpaceTooLarge("space too large to enumerate");
  return StateSpace(SpaceKind::multigraph, size, n, t, {});
}

StateSpace StateSpace::modular(int n) {
  if (n < 1) throw std::invalid_argument("modular space needs n >= 1");
  return StateSpace(SpaceKind::modular, static_cast<std::size_t>(n), n, 0, {});
}

StateSpace StateSpace::generic(std::vector<std::string> labels) {
  if (labels.empty()) throw std::invalid_argument("generic space needs at least one state");
  const std::size_t size = labels.size();
  return StateSpace(SpaceKind::generic, size, 0, 0, std::move(labels));
}

StateSpace StateSpace::generic(std::size_t size) {
  if (size == 0) throw std::invalid_argument("generic space needs at least one state");
  return StateSpace(SpaceKind::generic, size, 0, 0, {});
}

std::size_t StateSpace::num_dyads() const {
  return kind_ == SpaceKind::multigraph ? puchain::num_dyads(n_) : 0;
}

void StateSpace::require_multigraph(const char* what) const {
  if (kind_ != SpaceKind::multigraph) {
    throw std::invalid_argument(std::string(what) + " requires a multigraph space");
  }
}

Multigraph StateSpace::decode(StateIndex i) const {
  require_multigraph("decode");
  if (i >= size_) throw std::out_of_range("state index out of range");
  std::vector<int> m(num_dyads());
  const auto base = static_cast<std::size_t>(t_ + 1);
  std::size_t rest = i;
  for (auto& digit : m) {
    digit = static_cast<int>(rest % base);
    rest /= base;
  }
  return Multigraph(n_, t_, std::move(m));
}

StateIndex StateSpace::encode(const Multigraph& g) const {
  require_multigraph("encode");
  if (g.n() != n_ || g.t() > t_) throw std::invalid_argument("multigraph does not belong to this space");
  const auto base = static_cast<std::size_t>(t_ + 1);
  std::size_t index = 0;
  for (std::size_t f = g.num_dyads(); f-- > 0;) {
    index = index * base + static_cast<std::size_t>(g[f]);
  }
  return static_cast<StateIndex>(index);
}

std::string StateSpace::label(StateIndex i) const {
  if (i >= size_) throw std::out_of_range("state index out of range");
  if (!labels_.empty()) return labels_[i];
  return std::to_string(i);
}

}  // namespace puchain
