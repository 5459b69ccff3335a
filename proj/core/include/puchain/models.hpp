// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include "puchain/ermgm.hpp"
#include "puchain/expfam.hpp"
#include "puchain/matrix.hpp"

namespace puchain {

/// Erdos-Renyi graphs on G(n, 1): kappa = 1, tau(g) = |E(g)| / (n - 1).
ExpFamilySpec erdos_renyi_family(int n, ParameterMap eta);
/// mu(g) = p^|E(g)| (1 - p)^(N - |E(g)|).
Pmf erdos_renyi_pmf(int n, double p);

/// tau_f(m) = m / (n - 1) and kappa_f = 1 on every dyad of G(n, t).
ErmgmModel erdos_renyi_ermgm(int n, int t, ParameterMap eta);

/// tau(a, b) = |E(b)| / (n - 1), kappa = 1, eta = density_logit(n).
CefSpec density_cef(int n);
/// tau(a, b) = |E(complement(a xor b))| / (n - 1), kappa = 1, eta = density_logit(n).
CefSpec stability_cef(int n);
/// Transitivity statistic on G(n, 1) with kappa = 1.
CefSpec transitivity_cef(int n, ParameterMap eta = ParameterMap::natural(1));
/// Reciprocity statistic on loop-free directed graphs with kappa = 1. States
/// are DirectedGraph codes, so the space has 2^(n(n-1)) states; n <= 4.
CefSpec reciprocity_cef(int n, ParameterMap eta = ParameterMap::natural(1));

/// The three-state scalar-parameter example with eta = log(theta):
///   kappa = [[2, 1, 1], [1/3, 2/3, 3], [11/4, 1, 1/4]]
///   tau   = [[1, 1, 3], [3, 3, 1], [1, 3, 3]]
/// Rows 0 and 1 share the normalizer 3 theta + theta^3; row 2 does not.
CefSpec gani_cef();

/// P(a, b) = mu_p(b), the density chain, in closed form.
StochasticMatrix density_matrix(int n, double p);
/// P(a, b) = mu_p(complement(a xor b)), the stability chain, in closed form.
StochasticMatrix stability_matrix(int n, double p);

/// P(i, j) = 1/2 when j - i mod n is 0 or 1. Needs n >= 2.
StochasticMatrix modular_chain_matrix(int n);
/// (1/2, 1/2, 0, ..., 0), the step law of the modular walk.
Pmf modular_step_pmf(int n);

}  // namespace puchain
