#include "lrspin/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lrspin/errors.hpp"
#include "lrspin/parallel.hpp"

namespace lrspin {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kFlushFloor = 1e-270;  // keep running products well above denormals
constexpr int kFlushCount = 64;

double pow_uint(double base, std::uint32_t e) {
  double r = 1.0;
  while (e) {
    if (e & 1u) r *= base;
    base *= base;
    e >>= 1u;
  }
  return r;
}

}  // namespace

const char* to_string(EvalMode m) {
  return m == EvalMode::hamiltonian_exact ? "hamiltonian_exact" : "as_published";
}

ObservableSpec ObservableSpec::uniform(std::int64_t n, double a) {
  ObservableSpec o;
  o.coefficients.assign(static_cast<std::size_t>(n), a);
  return o;
}

void ObservableSpec::validate(std::int64_t n_sites) const {
  if (static_cast<std::int64_t>(coefficients.size()) != n_sites)
    throw ValidationError("observable: coefficient count must equal the site count");
  for (double a : coefficients)
    if (!std::isfinite(a)) throw ValidationError("observable: coefficients must be finite");
}

InitialStateSpec InitialStateSpec::uniform(std::int64_t n, double m) {
  InitialStateSpec s;
  s.site_x_expectations.assign(static_cast<std::size_t>(n), m);
  return s;
}

void InitialStateSpec::validate(std::int64_t n_sites) const {
  if (static_cast<std::int64_t>(site_x_expectations.size()) != n_sites)
    throw ValidationError("initial state: expectation count must equal the site count");
  for (double m : site_x_expectations)
    if (!(std::fabs(m) <= 1.0))
      throw ValidationError("initial state: site expectations must lie in [-1, 1]");
}

double initial_expectation(const ObservableSpec& obs, const InitialStateSpec& init) {
  if (obs.coefficients.size() != init.site_x_expectations.size())
    throw ValidationError("initial expectation: size mismatch between a and m");
  KahanSum acc;
  for (std::size_t i = 0; i < obs.coefficients.size(); ++i)
    acc.add(obs.coefficients[i] * init.site_x_expectations[i]);
  return acc.value();
}

AmplitudeEvaluator::AmplitudeEvaluator(const ModelParams& params,
                                       const DisplacementMultiset& multiset, EvalMode mode) {
  const double two_nn = 2.0 * params.normalization;
  const std::int64_t n = params.lattice.total_sites();
  if (mode == EvalMode::as_published) {
    if (params.lattice.dimension != 1)
      throw ValidationError("as_published mode is defined for the chain (d = 1) only");
    frequencies_.resize(static_cast<std::size_t>(n));
    mults_.assign(static_cast<std::size_t>(n), 2u);
    const double alpha = params.law.alpha;
    const double c = params.law.amplitude;
    parallel_for(n, 0, [&](std::int64_t i) {
      frequencies_[static_cast<std::size_t>(i)] =
          two_nn * c * std::pow(static_cast<double>(i + 1), -alpha);
    });
  } else {
    // Non-self entries arrive ordered by distance, hence by non-increasing
    // frequency; self-paired entries (doubled coupling) are merged in.
    std::vector<std::pair<double, std::uint32_t>> self;
    frequencies_.reserve(multiset.entries.size());
    mults_.reserve(multiset.entries.size());
    for (const auto& e : multiset.entries) {
      if (e.self_paired)
        self.emplace_back(two_nn * e.effective_strength(), e.multiplicity);
      else {
        frequencies_.push_back(two_nn * e.strength);
        mults_.push_back(e.multiplicity);
      }
    }
    if (!self.empty()) {
      std::stable_sort(self.begin(), self.end(),
                       [](const auto& a, const auto& b) { return a.first > b.first; });
      std::vector<double> freq;
      std::vector<std::uint32_t> mult;
      freq.reserve(frequencies_.size() + self.size());
      mult.reserve(frequencies_.size() + self.size());
      std::size_t i = 0, j = 0;
      while (i < frequencies_.size() || j < self.size()) {
        const bool take_self =
            i == frequencies_.size() || (j < self.size() && self[j].first > frequencies_[i]);
        if (take_self) {
          freq.push_back(self[j].first);
          mult.push_back(self[j].second);
          ++j;
        } else {
          freq.push_back(frequencies_[i]);
          mult.push_back(mults_[i]);
          ++i;
        }
      }
      frequencies_ = std::move(freq);
      mults_ = std::move(mult);
    }
  }
  direct_ = n <= 4096;
  if (!direct_) build_tails();
}

void AmplitudeEvaluator::build_tails() {
  const std::size_t n = frequencies_.size();
  tail2_.assign(n + 1, 0.0);
  tail4_.assign(n + 1, 0.0);
  tail6_.assign(n + 1, 0.0);
  tail8_.assign(n + 1, 0.0);
  long double s2 = 0, s4 = 0, s6 = 0, s8 = 0;
  for (std::size_t i = n; i-- > 0;) {
    const long double w2 = static_cast<long double>(frequencies_[i]) * frequencies_[i];
    const long double m = mults_[i];
    const long double w4 = w2 * w2;
    s2 += m * w2;
    s4 += m * w4;
    s6 += m * w4 * w2;
    s8 += m * w4 * w4;
    tail2_[i] = static_cast<double>(s2);
    tail4_[i] = static_cast<double>(s4);
    tail6_[i] = static_cast<double>(s6);
    tail8_[i] = static_cast<double>(s8);
  }
}

LogAmplitude AmplitudeEvaluator::log_amplitude(double t) const {
  if (t == 0.0) return {0.0, 1};
  const double at = std::fabs(t);

  std::size_t head_end = frequencies_.size();
  if (!tail2_.empty()) {
    head_end = static_cast<std::size_t>(
        std::partition_point(frequencies_.begin(), frequencies_.end(),
                             [at](double w) { return w * at > kTailCutoff; }) -
        frequencies_.begin());
  }

  KahanSum acc;
  int sign = 1;
  double prod = 1.0;
  int pending = 0;
  for (std::size_t i = 0; i < head_end; ++i) {
    const double c = std::cos(frequencies_[i] * t);
    const double ac = std::fabs(c);
    if (ac < kZeroTol) return {kNegInf, 0};
    if (c < 0.0 && (mults_[i] & 1u)) sign = -sign;
    prod *= pow_uint(ac, mults_[i]);
    if (++pending == kFlushCount || prod < kFlushFloor) {
      acc.add(std::log(prod));
      prod = 1.0;
      pending = 0;
    }
  }
  if (prod != 1.0) acc.add(std::log(prod));

  if (!tail2_.empty() && head_end < frequencies_.size()) {
    const double u = t * t;
    const double tail = -(tail2_[head_end] * u / 2.0 + tail4_[head_end] * u * u / 12.0 +
                          tail6_[head_end] * u * u * u / 45.0 +
                          tail8_[head_end] * u * u * u * u * (17.0 / 2520.0));
    acc.add(tail);
  }
  return {std::min(acc.value(), 0.0), sign};
}

double AmplitudeEvaluator::operator()(double t) const {
  if (t == 0.0) return 1.0;
  if (direct_) {
    double prod = 1.0;
    for (std::size_t i = 0; i < frequencies_.size(); ++i) {
      const double c = std::cos(frequencies_[i] * t);
      if (std::fabs(c) < kZeroTol) return 0.0;
      prod *= pow_uint(c, mults_[i]);
      if (std::fabs(prod) < kFlushFloor) break;  // negligible; finish in log space
    }
    if (std::fabs(prod) >= kFlushFloor) return prod;
  }
  const LogAmplitude la = log_amplitude(t);
  if (la.sign == 0) return 0.0;
  return la.sign * std::exp(la.log_magnitude);
}

double amplitude_factor(const ModelParams& params, const DisplacementMultiset& multiset,
                        double t, EvalMode mode) {
  if (!std::isfinite(t)) throw ValidationError("amplitude factor: t must be finite");
  return AmplitudeEvaluator(params, multiset, mode)(t);
}

LogAmplitude log_amplitude(const ModelParams& params, const DisplacementMultiset& multiset,
                           double t, EvalMode mode) {
  if (!std::isfinite(t)) throw ValidationError("log amplitude: t must be finite");
  return AmplitudeEvaluator(params, multiset, mode).log_amplitude(t);
}

void TimeGrid::validate() const {
  if (points < 1) throw ValidationError("time grid: need at least one point");
  if (!std::isfinite(t_min) || !std::isfinite(t_max))
    throw ValidationError("time grid: bounds must be finite");
  if (points > 1 && !(t_min < t_max))
    throw ValidationError("time grid: t_min must be < t_max");
  if (log_spacing && !(t_min > 0.0))
    throw ValidationError("time grid: log spacing requires t_min > 0");
}

std::vector<double> TimeGrid::make() const {
  validate();
  std::vector<double> t(static_cast<std::size_t>(points));
  if (points == 1) {
    t[0] = t_min;
    return t;
  }
  const double span = t_max - t_min;
  const double ratio = log_spacing ? std::log(t_max / t_min) : 0.0;
  for (int i = 0; i < points; ++i) {
    const double frac = static_cast<double>(i) / (points - 1);
    t[static_cast<std::size_t>(i)] =
        log_spacing ? t_min * std::exp(ratio * frac) : t_min + span * frac;
  }
  t.back() = t_max;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1]))
      throw ValidationError("time grid: spacing too fine, grid is not strictly increasing");
  return t;
}

TimeSeries expectation_series(const ModelParams& params, const DisplacementMultiset& multiset,
                              const ObservableSpec& obs, const InitialStateSpec& init,
                              const std::vector<double>& times, EvalMode mode, int workers) {
  const std::int64_t n = params.lattice.total_sites();
  obs.validate(n);
  init.validate(n);
  if (times.empty()) throw ValidationError("series: empty time grid");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ValidationError("series: times must be strictly increasing");

  const double a0 = initial_expectation(obs, init);
  const AmplitudeEvaluator eval(params, multiset, mode);
  const double two_h = 2.0 * params.field;

  TimeSeries s;
  s.times = times;
  s.values.resize(times.size());
  s.mode = mode;
  s.digest = params_digest(params);
  parallel_for(static_cast<std::int64_t>(times.size()), workers, [&](std::int64_t i) {
    const double t = times[static_cast<std::size_t>(i)];
    s.values[static_cast<std::size_t>(i)] = a0 * std::cos(two_h * t) * eval(t);
  });
  return s;
}

}  // namespace lrspin
