// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "puchain/state_space.hpp"

namespace puchain {

using Permutation = std::vector<StateIndex>;

/// True iff the sorted image of `p` is 0..p.size()-1.
bool is_bijection(std::span<const StateIndex> p);

Permutation inverse_permutation(std::span<const StateIndex> p);

enum class FamilyKind { identity, symdiff, stability, modular, custom };

std::string to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& name);

/// One permutation sigma_a of the state space per state a.
///
/// Members are validated as bijections at construction and their inverses are
/// tabulated alongside, so both directions are O(1) lookups.
class PermutationFamily {
 public:
  explicit PermutationFamily(std::vector<Permutation> sigma, FamilyKind kind = FamilyKind::custom);

  std::size_t size() const { return sigma_.size(); }
  FamilyKind kind() const { return kind_; }

  /// sigma_a(b)
  StateIndex apply(StateIndex a, StateIndex b) const { return sigma_[a][b]; }
  /// sigma_a^{-1}(c)
  StateIndex apply_inverse(StateIndex a, StateIndex c) const { return inverse_[a][c]; }

  const Permutation& member(StateIndex a) const { return sigma_.at(a); }
  const Permutation& inverse_member(StateIndex a) const { return inverse_.at(a); }
  const std::vector<Permutation>& members() const { return sigma_; }

  bool operator==(const PermutationFamily& other) const { return sigma_ == other.sigma_; }

 private:
  PermutationFamily(std::vector<Permutation> sigma, std::vector<Permutation> inverse, FamilyKind kind);
  friend PermutationFamily invert_family(const PermutationFamily& family);

  std::vector<Permutation> sigma_;
  std::vector<Permutation> inverse_;
  FamilyKind kind_;
};

/// Named families:
///   identity   sigma_a(b) = b
///   symdiff    sigma_a(b) = a xor b                (simple-graph spaces)
///   stability  sigma_a(b) = complement(a xor b)    (simple-graph spaces)
///   modular    sigma_i(j) = j - i mod n            (modular spaces)
PermutationFamily builtin_family(FamilyKind kind, const StateSpace& space);

struct SymmetryCheck {
  bool symmetric;
  std::optional<std::pair<StateIndex, StateIndex>> counterexample;
  explicit operator bool() const { return symmetric; }
};

/// sigma_a(b) == sigma_b(a) for all a, b.
SymmetryCheck is_symmetric_family(const PermutationFamily& family);

PermutationFamily invert_family(const PermutationFamily& family);

}  // namespace puchain
