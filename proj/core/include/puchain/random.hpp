// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace puchain {

/// Stateless counter-based generator.
///
/// Every draw is a pure function of (seed, stream, counter), so draws can be
/// produced in any order, on any thread, with identical results. Stream layout
/// used across the library:
///   chains:      stream = replicate, counter = step
///   multigraphs: stream = replicate, counter = dyad index
/// The mixing function is the SplitMix64 finalizer applied once per key.
std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Uniform double in [0, 1) with 53 random bits.
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Inverse-CDF draw from the mass vector `pmf` using the uniform `u`.
/// Never returns an index with zero mass.
std::size_t inverse_cdf(std::span<const double> pmf, double u);

}  // namespace puchain
