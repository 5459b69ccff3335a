// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace puchain {

using StateIndex = std::uint32_t;

/// Default upper bound on the number of states an enumerable space may have.
inline constexpr std::size_t kDefaultEnumerationCap = std::size_t{1} << 24;

/// Raised when a space (or an enumeration over one) exceeds its cap.
class SpaceTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Raised when an internal consistency check that should hold by construction
/// fails. Seeing one of these means a bug, not bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An unordered pair of distinct vertices, stored 0-based with v < u.
struct Dyad {
  int u;
  int v;
  bool operator==(const Dyad&) const = default;
};

/// N = n(n-1)/2.
std::size_t num_dyads(int n);

/// Position of {u, v} in the canonical order: pairs (u, v) with v < u,
/// sorted lexicographically by (u, v). Accepts the vertices in either order.
std::size_t dyad_index(int u, int v);

Dyad dyad_at(std::size_t f);

/// A multigraph on n vertices with dyad multiplicities in [0, t].
/// Simple graphs are the t = 1 case.
class Multigraph {
 public:
  Multigraph(int n, int t);
  Multigraph(int n, int t, std::vector<int> multiplicities);

  int n() const { return n_; }
  int t() const { return t_; }
  std::size_t num_dyads() const { return m_.size(); }

  int operator[](std::size_t f) const { return m_[f]; }
  /// Multiplicity of the dyad {u, v}; 0-based vertices, 0 on the diagonal.
  int at(int u, int v) const;
  void set(std::size_t f, int multiplicity);
  std::span<const int> multiplicities() const { return m_; }

  /// Sum of multiplicities (the edge count |E| for simple graphs).
  int edge_count() const;

  bool operator==(const Multigraph&) const = default;

 private:
  int n_;
  int t_;
  std::vector<int> m_;
};

enum class SpaceKind { multigraph, modular, generic };

/// A finite state space with a bijection to indices 0..size-1.
///
/// Multigraph states are encoded as base-(t+1) integers whose f-th digit
/// (least significant first) is the multiplicity of the f-th dyad. For simple
/// graphs this makes symmetric difference an XOR and complement a mask flip.
class StateSpace {
 public:
  static StateSpace multigraph(int n, int t, std::size_t cap = kDefaultEnumerationCap);
  static StateSpace modular(int n);
  static StateSpace generic(std::vector<std::string> labels);
  /// Unlabelled generic space; labels render as the index.
  static StateSpace generic(std::size_t size);

  SpaceKind kind() const { return kind_; }
  std::size_t size() const { return size_; }
  /// Vertex count for multigraph spaces, modulus for modular spaces.
  int n() const { return n_; }
  /// Maximum multiplicity for multigraph spaces, 0 otherwise.
  int t() const { return t_; }
  bool is_simple_graph_space() const { return kind_ == SpaceKind::multigraph && t_ == 1; }
  std::size_t num_dyads() const;

  Multigraph decode(StateIndex i) const;
  StateIndex encode(const Multigraph& g) const;
  std::string label(StateIndex i) const;
  bool has_labels() const { return !labels_.empty(); }

  bool operator==(const StateSpace&) const = default;

 private:
  StateSpace(SpaceKind kind, std::size_t size, int n, int t, std::vector<std::string> labels);
  void require_multigraph(const char* what) const;

  SpaceKind kind_;
  std::size_t size_;
  int n_;
  int t_;
  std::vector<std::string> labels_;
};

}  // namespace puchain
