#pragma once

#include "biewos/greens.hpp"
#include "biewos/wos.hpp"

namespace biewos {

// Sign convention: the reported Neumann value is the derivative along -axis,
// the outward normal of the solution domain restricted to the disk. For a
// charged boundary this is the surface charge density.
struct PointNeumannResult {
    Real sigma1 = 0; // regularized cap integral (Monte Carlo)
    Real sigma2 = 0; // de-singularized disk integral (deterministic)
    Real total = 0;  // sigma1 + sigma2
    Real std_error = 0;
    Real a = 0, delta = 0;
    int n_g1 = 0, n_g2 = 0;
    WosConfig wos;
};

// De-singularized disk integral
//   -(1/2pi) int_{S_a \ Lambda_delta} (1/rho^3 - 1/a^3)(phi(y) - phi(x)) ds.
// Piecewise-constant plate scenes use an exact polar decomposition instead of
// the ring rule (the integrand is piecewise constant in phi(y)).
Real sigma2_prime(const Scene& scene, const HemisphereFrame& frame, Real delta, int n_g2);

// Regularized cap integral with WOS values at the Gauss nodes; returns
// (value, propagated standard error).
std::pair<Real, Real> sigma1_prime(const Scene& scene, const HemisphereFrame& frame, int n_g1,
                                   const WosConfig& cfg);
std::pair<Real, Real> sigma1_prime(const Scene& scene, const HemisphereFrame& frame, int n_g1,
                                   const PotentialSampler& sampler);

PointNeumannResult solve_point(const Scene& scene, const HemisphereFrame& frame, int n_g1,
                               int n_g2, Real delta, const WosConfig& cfg);
PointNeumannResult solve_point(const Scene& scene, const HemisphereFrame& frame, int n_g1,
                               int n_g2, Real delta, const WosConfig& cfg,
                               const PotentialSampler& sampler);

} // namespace biewos
