// Apache License, Version 2.0, refer to LICENSE.txt
#include "puchain/permutation.hpp"

#include <stdexcept>

namespace puchain {

bool is_bijection(std::span<const StateIndex> p) {
  std::vector<bool> seen(p.size(), false);
  for (StateIndex image : p) {
    if (image >= p.size() || seen[image]) return false;
    seen[image] = true;
  }
  return true;
}

Permutation inverse_permutation(std::span<const StateIndex> p) {
  Permutation inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = static_cast<StateIndex>(i);
  return inv;
}

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::identity: return "identity";
    case FamilyKind::symdiff: return "symdiff";
    case FamilyKind::stability: return "stability";
    case FamilyKind::modular: return "modular";
    case FamilyKind::custom: return "custom";
  }
  return "custom";
}

FamilyKind family_kind_from_string(const std::string& name) {
  if (name == "identity") return FamilyKind::identity;
  if (name == "symdiff") return FamilyKind::symdiff;
  if (name == "stability") return FamilyKind::stability;
  if (name == "modular") return FamilyKind::modular;
  if (name == "custom") return FamilyKind::custom;
  throw std::invalid_argument("unknown permutation family '" + name + "'");
}

PermutationFamily::PermutationFamily(std::vector<Permutation> sigma, FamilyKind kind)
    : sigma_(std::move(sigma)), kind_(kind) {
  if (sigma_.empty()) throw std::invalid_argument("permutation family must not be empty");
  inverse_.reserve(sigma_.size());
  for (std::size_t a = 0; a < sigma_.size(); ++a) {
    if (sigma_[a].size() != sigma_.size()) {
      throw std::invalid_argument("family member " + std::to_string(a) + " has the wrong length");
    }
    if (!is_bijection(sigma_[a])) {
      throw std::invalid_argument("family member " + std::to_string(a) + " is not a bijection");
    }
    inverse_.push_back(inverse_permutation(sigma_[a]));
  }
}

PermutationFamily::PermutationFamily(std::vector<Permutation> sigma, std::vector<Permutation> inverse,
                                     FamilyKind kind)
    : sigma_(std::move(sigma)), inverse_(std::move(inverse)), kind_(kind) {}

PermutationFamily builtin_family(FamilyKind kind, const StateSpace& space) {
  const std::size_t size = space.size();
  if (size > (std::size_t{1} << 14)) {
    throw SpaceTooLarge("explicit permutation families are limited to 2^14 states");
  }
  std::vector<Permutation> sigma(size, Permutation(size));
  switch (kind) {
    case FamilyKind::identity:
      for (auto& p : sigma) {
        for (std::size_t b = 0; b < size; ++b) p[b] = static_cast<StateIndex>(b);
      }
      break;
    case FamilyKind::symdiff:
    case FamilyKind::stability: {
      if (!space.is_simple_graph_space()) {
        throw std::invalid_argument(to_string(kind) + " family needs a simple-graph space");
      }
      const auto mask = static_cast<StateIndex>(size - 1);
      const StateIndex flip = kind == FamilyKind::stability ? mask : 0;
      for (std::size_t a = 0; a < size; ++a) {
        for (std::size_t b = 0; b < size; ++b) {
          sigma[a][b] = static_cast<StateIndex>((a ^ b) ^ flip);
        }
      }
      break;
    }
    case FamilyKind::modular: {
      if (space.kind() != SpaceKind::modular) {
        throw std::invalid_argument("modular family needs a modular space");
      }
      for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
          sigma[i][j] = static_cast<StateIndex>((j + size - i) % size);
        }
      }
      break;
    }
    case FamilyKind::custom:
      throw std::invalid_argument("custom families are supplied as explicit index arrays");
  }
  return PermutationFamily(std::move(sigma), kind);
}

SymmetryCheck is_symmetric_family(const PermutationFamily& family) {
  const auto size = static_cast<StateIndex>(family.size());
  for (StateIndex a = 0; a < size; ++a) {
    for (StateIndex b = a + 1; b < size; ++b) {
      if (family.apply(a, b) != family.apply(b, a)) return {false, std::make_pair(a, b)};
    }
  }
  return {true, std::nullopt};
}

PermutationFamily invert_family(const PermutationFamily& family) {
  FamilyKind kind = family.kind();
  // j -> j - i inverts to j -> j + i, which is no longer the named family.
  if (kind == FamilyKind::modular) kind = FamilyKind::custom;
  return PermutationFamily(family.inverse_, family.sigma_, kind);
}

}  // namespace puchain
