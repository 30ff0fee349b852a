#pragma once

#include <cstdint>
#include <vector>

#include "lrspin/evolution.hpp"
#include "lrspin/model.hpp"

namespace lrspin {

// First t > 0 with |F(t)| <= theta (theta in (0, 1]; theta == 1 gives 0).
// F decreases monotonically from 1 until its first zero, so the crossing is
// unique; it is bracketed by a geometric scan (factor 1.05 steps starting from
// the inverse Gaussian-envelope scale) and refined by bisection to 1e-6
// relative precision. The Larmor factor plays no role here: F excludes it.
double equilibration_time(const ModelParams& params, const DisplacementMultiset& multiset,
                          double theta);

/// Unweighted least squares of y against x; exponent is the slope.
struct PowerLawFit {
  double exponent = 0.0;
  double stderr_exponent = 0.0;
  double intercept = 0.0;
  std::vector<double> residuals;
};

PowerLawFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct EquilibrationReport {
  double theta = 0.5;
  double alpha = 0.0;
  int dimension = 1;
  std::vector<std::int64_t> n_values;  // sorted ascending
  std::vector<double> tau0;
  double gamma = 0.0;
  double gamma_stderr = 0.0;
  std::vector<double> residuals;  // of ln tau0 vs ln N
};

/// tau0 for every size in `sides` (side length per axis; equals N when d = 1),
/// then OLS of ln tau0 against ln N. Sizes are processed independently and
/// assembled by index. Needs at least 4 sizes.
EquilibrationReport scaling_exponent(const CouplingLaw& law, int dimension,
                                     const std::vector<std::int64_t>& sides, double theta,
                                     int workers = 0);

/// max over the grid and over size pairs of |F_N(t) - F_N'(t)|.
double curve_collapse_metric(const CouplingLaw& law, int dimension,
                             const std::vector<std::int64_t>& sides,
                             const std::vector<double>& times, int workers = 0);

// Times of every grid-detected local maximum of F exceeding 1 - eta in
// (t_first_zero, t_max], each refined by golden-section ascent. Intended for
// small systems where recurrences are reachable; an empty result is valid.
std::vector<double> recurrence_scan(const ModelParams& params,
                                    const DisplacementMultiset& multiset, double eta,
                                    double t_max);

}  // namespace lrspin
