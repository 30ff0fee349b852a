#include "lrspin/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "lrspin/bounds.hpp"
#include "lrspin/errors.hpp"
#include "lrspin/parallel.hpp"

namespace lrspin {

namespace {

constexpr double kScanFactor = 1.05;
constexpr int kScanCap = 4000;

double golden_ascent(const AmplitudeEvaluator& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-10 * std::max(1.0, b)) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return (a + b) / 2.0;
}

}  // namespace

double equilibration_time(const ModelParams& params, const DisplacementMultiset& multiset,
                          double theta) {
  if (!(theta > 0.0) || !(theta <= 1.0))
    throw ValidationError("equilibration time: theta must lie in (0, 1]");
  if (theta == 1.0) return 0.0;
  if (multiset.kac_sum == 0.0)
    throw ValidationError("equilibration time: couplings are switched off, |F| never decays");

  const AmplitudeEvaluator eval(params, multiset);
  const double log_theta = std::log(theta);
  auto below = [&](double t) { return eval.log_amplitude(t).log_magnitude <= log_theta; };

  const double s2 = second_moment(multiset);
  const double envelope_scale = params.normalization * std::sqrt(s2);
  double t = 0.1 / envelope_scale;

  double lo, hi;
  if (below(t)) {
    int steps = 0;
    do {
      if (++steps > kScanCap)
        throw ValidationError("equilibration time: no bracket found below the scan cap");
      t /= kScanFactor;
    } while (below(t));
    lo = t;
    hi = t * kScanFactor;
  } else {
    int steps = 0;
    do {
      if (++steps > kScanCap)
        throw ValidationError("equilibration time: no crossing found below the scan cap");
      t *= kScanFactor;
    } while (!below(t));
    lo = t / kScanFactor;
    hi = t;
  }
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (below(mid))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

PowerLawFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ValidationError("power-law fit: need at least two (x, y) pairs");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw ValidationError("power-law fit: data must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("power-law fit: x values must not all coincide");

  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  fit.residuals.resize(n);
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    fit.residuals[i] = ly[i] - (fit.intercept + fit.exponent * lx[i]);
    ss_res += fit.residuals[i] * fit.residuals[i];
  }
  fit.stderr_exponent =
      n > 2 ? std::sqrt(ss_res / (static_cast<double>(n) - 2.0) / sxx) : 0.0;
  return fit;
}

EquilibrationReport scaling_exponent(const CouplingLaw& law, int dimension,
                                     const std::vector<std::int64_t>& sides, double theta,
                                     int workers) {
  if (sides.size() < 4)
    throw ValidationError("scaling exponent: need at least 4 distinct sizes");
  std::vector<std::int64_t> sorted = sides;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ValidationError("scaling exponent: sizes must be distinct");

  EquilibrationReport report;
  report.theta = theta;
  report.alpha = law.alpha;
  report.dimension = dimension;
  report.tau0.resize(sorted.size());
  report.n_values.resize(sorted.size());

  parallel_for(static_cast<std::int64_t>(sorted.size()), workers, [&](std::int64_t i) {
    const LatticeSpec lattice{dimension, sorted[static_cast<std::size_t>(i)], Metric::euclidean};
    const ModelParams params = make_model(lattice, law, 0.0);
    const auto multiset = displacement_multiset(lattice, law);
    report.n_values[static_cast<std::size_t>(i)] = lattice.total_sites();
    report.tau0[static_cast<std::size_t>(i)] = equilibration_time(params, multiset, theta);
  });

  std::vector<double> n_real(report.n_values.size());
  for (std::size_t i = 0; i < n_real.size(); ++i)
    n_real[i] = static_cast<double>(report.n_values[i]);
  const PowerLawFit fit = fit_loglog(n_real, report.tau0);
  report.gamma = fit.exponent;
  report.gamma_stderr = fit.stderr_exponent;
  report.residuals = fit.residuals;
  return report;
}

double curve_collapse_metric(const CouplingLaw& law, int dimension,
                             const std::vector<std::int64_t>& sides,
                             const std::vector<double>& times, int workers) {
  if (sides.size() < 2) throw ValidationError("curve collapse: need at least 2 sizes");
  if (times.empty()) throw ValidationError("curve collapse: empty time grid");

  std::vector<std::vector<double>> curves(sides.size());
  for (std::size_t s = 0; s < sides.size(); ++s) {
    const LatticeSpec lattice{dimension, sides[s], Metric::euclidean};
    const ModelParams params = make_model(lattice, law, 0.0);
    const auto multiset = displacement_multiset(lattice, law);
    const AmplitudeEvaluator eval(params, multiset);
    curves[s].resize(times.size());
    parallel_for(static_cast<std::int64_t>(times.size()), workers, [&](std::int64_t i) {
      curves[s][static_cast<std::size_t>(i)] = eval(times[static_cast<std::size_t>(i)]);
    });
  }
  double metric = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double lo = curves[0][i], hi = curves[0][i];
    for (std::size_t s = 1; s < curves.size(); ++s) {
      lo = std::min(lo, curves[s][i]);
      hi = std::max(hi, curves[s][i]);
    }
    metric = std::max(metric, hi - lo);
  }
  return metric;
}

std::vector<double> recurrence_scan(const ModelParams& params,
                                    const DisplacementMultiset& multiset, double eta,
                                    double t_max) {
  if (!(eta > 0.0) || !(eta < 1.0))
    throw ValidationError("recurrence scan: eta must lie in (0, 1)");
  if (!(t_max > 0.0)) throw ValidationError("recurrence scan: t_max must be > 0");
  if (multiset.kac_sum == 0.0) return {};  // constant F has no isolated maxima

  const AmplitudeEvaluator eval(params, multiset);
  const double omega_max = 2.0 * params.normalization * multiset.max_effective_strength;
  const double t_first_zero = std::asin(1.0) / omega_max;  // (pi/2) / omega_max
  const double step = (std::asin(1.0) / omega_max) / 16.0;
  const double threshold = 1.0 - eta;

  std::vector<double> found;
  double t_prev = t_first_zero + step;
  double t_curr = t_prev + step;
  double f_prev = eval(t_prev);
  double f_curr = eval(t_curr);
  for (double t_next = t_curr + step; t_next <= t_max; t_next += step) {
    const double f_next = eval(t_next);
    if (f_curr >= f_prev && f_curr >= f_next && f_curr > 0.5 * threshold) {
      const double peak = golden_ascent(eval, t_prev, t_next);
      if (eval(peak) > threshold &&
          (found.empty() || peak - found.back() > step))
        found.push_back(peak);
    }
    f_prev = f_curr;
    f_curr = f_next;
    t_prev = t_curr;
    t_curr = t_next;
  }
  return found;
}

}  // namespace lrspin
