#include "lrspin/bounds.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include "lrspin/errors.hpp"
#include "lrspin/evolution.hpp"
#include "lrspin/parallel.hpp"

namespace lrspin {

namespace {

// The two scalar kernel inequalities behind the envelopes, scanned on a dense
// grid once per process before either bound is used.
void verify_kernel_inequalities() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    constexpr int kPoints = 1'000'000;
    const double half_pi = std::asin(1.0);
    for (int i = 0; i <= kPoints; ++i) {
      const double x = half_pi * i / kPoints;
      if (std::cos(x) > std::exp(-x * x / 2.0))
        throw std::logic_error("kernel scan failed: cos(x) <= exp(-x^2/2) on [0, pi/2]");
    }
    for (int i = 0; i <= kPoints; ++i) {
      const double x = kLowerArgMax * i / kPoints;
      const double c = std::cos(x);
      if (c * c < std::exp(-2.0 * x * x))
        throw std::logic_error("kernel scan failed: cos^2(x) >= exp(-2x^2) on [0, 1]");
    }
  });
}

double gaussian_exponent(const ModelParams& params, double s2, double t) {
  const double nn = params.normalization;
  return nn * nn * s2 * t * t;
}

struct CouplingSums {
  double kac = 0.0;       // per-site sum, self-paired doubled
  double s2_eff = 0.0;    // second moment with effective strengths
  double max_eff = 0.0;   // largest effective strength
};

// Streamed chain sums via lazily extended prefix accumulators, so a doubling +
// bisection search costs O(N0) power evaluations in total.
class ChainSumCache {
 public:
  explicit ChainSumCache(const CouplingLaw& law) : law_(law) {}

  CouplingSums at(std::int64_t n_sites) {
    const std::int64_t half = n_sites / 2;
    auto it = checkpoints_.upper_bound(half);
    State st = it == checkpoints_.begin() ? State{} : std::prev(it)->second;
    for (std::int64_t j = st.count + 1; j <= half; ++j) {
      const double eps = std::pow(static_cast<double>(j), -law_.alpha);
      st.p1.add(eps);
      st.p2.add(eps * eps);
    }
    st.count = half;
    checkpoints_[half] = st;

    const double c = law_.amplitude;
    const double eps_half = std::pow(static_cast<double>(half), -law_.alpha);
    CouplingSums sums;
    sums.kac = 2.0 * c * st.p1.value();
    // 2 sum_{j<half} eps^2 + (2 eps(half))^2
    sums.s2_eff = c * c * (2.0 * st.p2.value() + 2.0 * eps_half * eps_half);
    sums.max_eff = c * std::max(1.0, 2.0 * eps_half);
    return sums;
  }

 private:
  struct State {
    KahanSum p1, p2;
    std::int64_t count = 0;
  };
  CouplingLaw law_;
  std::map<std::int64_t, State> checkpoints_;
};

CouplingSums lattice_sums(const CouplingLaw& law, int dimension, std::int64_t side) {
  LatticeSpec lattice{dimension, side, Metric::euclidean};
  const auto ms = displacement_multiset(lattice, law);
  return {ms.kac_sum, second_moment(ms), ms.max_effective_strength};
}

}  // namespace

double second_moment(const DisplacementMultiset& multiset) {
  KahanSum acc;
  for (const auto& e : multiset.entries) {
    const double eff = e.effective_strength();
    acc.add(static_cast<double>(e.multiplicity) * eff * eff);
  }
  return acc.value();
}

BoundResult gaussian_upper_bound(const ModelParams& params, const DisplacementMultiset& multiset,
                                 double t) {
  if (!(t >= 0.0)) throw ValidationError("upper bound: t must be >= 0");
  verify_kernel_inequalities();
  const double half_pi = std::asin(1.0);
  const double max_arg = 2.0 * params.normalization * multiset.max_effective_strength * t;
  BoundResult r;
  if (max_arg > half_pi) {
    r.value = 1.0;
    r.log_value = 0.0;
    r.valid = false;
    r.validity_reason = "argument exceeded pi/2 cutoff";
    return r;
  }
  r.log_value = -2.0 * gaussian_exponent(params, second_moment(multiset), t);
  r.value = std::exp(r.log_value);
  r.valid = true;
  return r;
}

BoundResult gaussian_lower_bound(const ModelParams& params, const DisplacementMultiset& multiset,
                                 double t) {
  if (!(t >= 0.0)) throw ValidationError("lower bound: t must be >= 0");
  verify_kernel_inequalities();
  const double max_arg = 2.0 * params.normalization * multiset.max_effective_strength * t;
  BoundResult r;
  if (max_arg > kLowerArgMax) {
    r.value = 0.0;
    r.log_value = -std::numeric_limits<double>::infinity();
    r.valid = false;
    r.validity_reason = "argument exceeded the verified kernel window [0, 1]";
    return r;
  }
  r.log_value = -4.0 * gaussian_exponent(params, second_moment(multiset), t);
  r.value = std::exp(r.log_value);
  r.valid = true;
  return r;
}

std::int64_t minimal_system_size(double tau, double delta, const CouplingLaw& law,
                                 int dimension, double a0) {
  law.validate();
  if (dimension < 1) throw ValidationError("minimal size: dimension must be >= 1");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("minimal size: tau must be > 0");
  if (!(delta > 0.0)) throw ValidationError("minimal size: delta must be > 0");
  if (!(std::fabs(a0) > delta))
    throw ValidationError("minimal size: need |A0| > delta");
  if (!(law.alpha < static_cast<double>(dimension)))
    throw ValidationError(
        "minimal size: requires the strong long-range regime alpha < dimension");
  verify_kernel_inequalities();

  ChainSumCache chain(law);
  auto certified = [&](std::int64_t side) {
    const CouplingSums sums = dimension == 1 ? chain.at(side) : lattice_sums(law, dimension, side);
    if (sums.kac == 0.0) return true;  // couplings off: nothing ever moves
    const double nn = 1.0 / sums.kac;
    if (2.0 * nn * sums.max_eff * tau > kLowerArgMax) return false;
    const double deviation = std::fabs(a0) * -std::expm1(-4.0 * nn * nn * sums.s2_eff * tau * tau);
    return deviation < delta;
  };
  auto total_sites = [&](std::int64_t side) {
    std::int64_t n = 1;
    for (int k = 0; k < dimension; ++k) n *= side;
    return n;
  };

  // Smallest admissible size: N = 4 on the chain, L = 2 above it.
  std::int64_t lo_side = dimension == 1 ? 4 : 2;
  if (certified(lo_side)) return total_sites(lo_side);
  std::int64_t hi_side = lo_side;
  for (;;) {
    if (total_sites(hi_side) >= kEnumerationCap)
      throw ResourceCapError("minimal size: no certified N at or below the 2^26 search cap");
    hi_side *= 2;
    if (certified(hi_side)) break;
    lo_side = hi_side;
  }
  while (hi_side - lo_side > 2) {
    const std::int64_t mid = (lo_side + hi_side) / 2 / 2 * 2;
    if (certified(mid))
      hi_side = mid;
    else
      lo_side = mid;
  }
  return total_sites(hi_side);
}

double max_initial_deviation(const CouplingLaw& law, int dimension, std::int64_t n_sites,
                             double a0, double tau, int grid_points, int workers) {
  if (grid_points < 1) throw ValidationError("deviation check: need at least one grid point");
  std::int64_t side = n_sites;
  if (dimension != 1) {
    side = static_cast<std::int64_t>(
        std::llround(std::pow(static_cast<double>(n_sites), 1.0 / dimension)));
    std::int64_t check = 1;
    for (int k = 0; k < dimension; ++k) check *= side;
    if (check != n_sites)
      throw ValidationError("deviation check: n_sites must be a perfect d-th power");
  }
  LatticeSpec lattice{dimension, side, Metric::euclidean};
  const ModelParams params = make_model(lattice, law, 0.0);
  const auto multiset = displacement_multiset(lattice, law);
  const AmplitudeEvaluator eval(params, multiset);

  std::vector<double> dev(static_cast<std::size_t>(grid_points));
  parallel_for(grid_points, workers, [&](std::int64_t i) {
    const double t = tau * static_cast<double>(i) / grid_points;
    dev[static_cast<std::size_t>(i)] = std::fabs(a0) * std::fabs(1.0 - eval(t));
  });
  double m = 0.0;
  for (double d : dev) m = std::max(m, d);
  return m;
}

}  // namespace lrspin
