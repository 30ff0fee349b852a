#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrspin/model.hpp"

namespace lrspin {

// Two variants of the amplitude product:
//   hamiltonian_exact - one cosine per displacement class, self-paired classes
//                       at doubled coupling; agrees with the brute-force
//                       evaluator on small systems and is the default.
//   as_published      - the literal chain product prod_{j=1..N} cos^2, which
//                       differs from the Hamiltonian product by a boundary
//                       factor (chain only).
enum class EvalMode { hamiltonian_exact, as_published };

const char* to_string(EvalMode m);

/// Observable A = sum_i a_i sigma_i^x.
struct ObservableSpec {
  std::vector<double> coefficients;

  static ObservableSpec uniform(std::int64_t n, double a = 1.0);
  void validate(std::int64_t n_sites) const;
};

/// Product initial state given by the per-site x expectations m_i in [-1, 1].
struct InitialStateSpec {
  std::vector<double> site_x_expectations;

  static InitialStateSpec uniform(std::int64_t n, double m = 1.0);
  void validate(std::int64_t n_sites) const;
};

/// <A>(0) = sum_i a_i m_i.
double initial_expectation(const ObservableSpec& obs, const InitialStateSpec& init);

struct LogAmplitude {
  double log_magnitude = 0.0;  // ln|F(t)|, -inf when a cosine factor vanishes
  int sign = 1;                // -1, 0, +1
};

// Evaluates the amplitude factor F(t). Small systems (N <= 4096) multiply the
// cosine factors directly; larger ones accumulate ln|cos| in log space with
// compensated summation. Factors are kept sorted by decreasing frequency and
// the sub-threshold tail (arguments below kTailCutoff) is summed in closed
// form from precomputed suffix moments of the frequencies, so an evaluation
// touches only the few factors that are outside the small-angle regime.
class AmplitudeEvaluator {
 public:
  AmplitudeEvaluator(const ModelParams& params, const DisplacementMultiset& multiset,
                     EvalMode mode = EvalMode::hamiltonian_exact);

  LogAmplitude log_amplitude(double t) const;
  double operator()(double t) const;

  bool direct_mode() const { return direct_; }
  std::size_t factor_count() const { return frequencies_.size(); }

  static constexpr double kTailCutoff = 0.05;    // max small-angle argument
  static constexpr double kZeroTol = 1e-15;      // |cos| below this counts as an exact zero

 private:
  std::vector<double> frequencies_;     // cosine arguments per unit time, descending
  std::vector<std::uint32_t> mults_;
  std::vector<double> tail2_, tail4_, tail6_, tail8_;  // suffix sums of mult * omega^(2k)
  bool direct_ = false;

  void build_tails();
};

/// F(t) per Eq.-(10)-style product; Larmor factor cos(2ht) not included.
double amplitude_factor(const ModelParams& params, const DisplacementMultiset& multiset,
                        double t, EvalMode mode = EvalMode::hamiltonian_exact);

/// Numerically stable (ln|F|, sign) form of the product.
LogAmplitude log_amplitude(const ModelParams& params, const DisplacementMultiset& multiset,
                           double t, EvalMode mode = EvalMode::hamiltonian_exact);

/// Sampling grid; log spacing requires t_min > 0.
struct TimeGrid {
  double t_min = 0.0;
  double t_max = 0.0;
  int points = 0;
  bool log_spacing = false;

  void validate() const;
  std::vector<double> make() const;
};

struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;
  EvalMode mode = EvalMode::hamiltonian_exact;
  std::string digest;  // params_digest of the generating model
};

/// <A>(t_k) = <A>(0) * cos(2 h t_k) * F(t_k); data-parallel over grid points
/// with bit-identical results for any worker count.
TimeSeries expectation_series(const ModelParams& params, const DisplacementMultiset& multiset,
                              const ObservableSpec& obs, const InitialStateSpec& init,
                              const std::vector<double>& times,
                              EvalMode mode = EvalMode::hamiltonian_exact, int workers = 0);

}  // namespace lrspin
