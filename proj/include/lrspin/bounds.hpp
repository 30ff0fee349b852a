#pragma once

#include <cstdint>
#include <string>

#include "lrspin/model.hpp"

namespace lrspin {

/// Result of a computable envelope evaluation. Outside its validity window a
/// bound degrades to the trivial one (1 for upper, 0 for lower) with valid
/// set to false and the reason recorded.
struct BoundResult {
  double value = 1.0;
  double log_value = 0.0;  // ln(value); avoids underflow in comparisons
  bool valid = false;
  std::string validity_reason;
};

/// Largest argument of the lower-bound kernel cos^2(x) >= exp(-2 x^2); the
/// inequality is verified on a dense grid before first use.
inline constexpr double kLowerArgMax = 1.0;

/// S2 = sum of multiplicity * (effective strength)^2; self-paired strengths
/// are doubled before squaring, matching their doubled coupling.
double second_moment(const DisplacementMultiset& multiset);

/// |F(t)| <= exp(-2 N_N^2 S2 t^2), valid while every argument
/// 2 N_N * (effective strength) * t stays within [-pi/2, pi/2]
/// (from cos(x) <= exp(-x^2/2) there).
BoundResult gaussian_upper_bound(const ModelParams& params, const DisplacementMultiset& multiset,
                                 double t);

/// F(t) >= exp(-4 N_N^2 S2 t^2), valid while every argument stays within
/// [-1, 1] (from cos^2(x) >= exp(-2 x^2) there); all factors are then positive.
BoundResult gaussian_lower_bound(const ModelParams& params, const DisplacementMultiset& multiset,
                                 double t);

// Smallest even system size whose lower-bound certificate guarantees
// |<A>(t) - <A>(0)| < delta for all t < tau (field-free dynamics):
//   |A0| * (1 - exp(-4 N_N^2 S2 tau^2)) < delta
// with every bound argument within the verified kernel window. Geometric
// doubling brackets the answer, bisection over even sizes refines it; the
// certificate is monotone in N in the strong long-range regime. Requires
// alpha < dimension; the search is capped at 2^26 sites.
std::int64_t minimal_system_size(double tau, double delta, const CouplingLaw& law,
                                 int dimension, double a0);

/// A-posteriori check for a returned N0: max_t |A0| * |1 - F(t)| on a uniform
/// grid over [0, tau). The caller compares the result against delta.
double max_initial_deviation(const CouplingLaw& law, int dimension, std::int64_t n_sites,
                             double a0, double tau, int grid_points, int workers = 0);

}  // namespace lrspin
