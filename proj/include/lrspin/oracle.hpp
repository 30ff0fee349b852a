#pragma once

#include <cstdint>
#include <vector>

#include "lrspin/evolution.hpp"
#include "lrspin/model.hpp"

namespace lrspin {

/// Spin configuration in the sigma^z product basis; bit value 0 at position i
/// encodes s_i = +1, bit value 1 encodes s_i = -1.
struct ZConfiguration {
  std::uint32_t bits = 0;

  int spin(int site) const { return (bits >> site) & 1u ? -1 : +1; }
};

inline constexpr int kOracleMaxSites = 24;

/// Diagonal energy of a configuration under the literal double-sum Hamiltonian.
double configuration_energy(const ModelParams& params, ZConfiguration s);

/// Energy gap E(s with spin at `site` flipped) - E(s), evaluated directly from
/// the Hamiltonian's neighbor sums (no displacement multiset involved).
double flip_energy_gap(const ModelParams& params, ZConfiguration s, int site);

// Brute-force evaluator of <A>(t) by enumerating all 2^N z-configurations in
// Gray-code order with incremental gap updates. This is the ground truth the
// closed-form product is validated against.
class OracleEngine {
 public:
  OracleEngine(const ModelParams& params, const ObservableSpec& obs,
               const InitialStateSpec& init);

  /// <A>(t); data-parallel over fixed configuration blocks with an ordered
  /// reduction, so the result does not depend on the worker count.
  double expectation(double t, int workers = 0) const;

  std::int64_t site_count() const { return n_; }

 private:
  struct BlockSums {
    double cos_sum = 0.0;
    double sin_sum = 0.0;
  };
  BlockSums run_block(std::int64_t g_begin, std::int64_t g_end, double t) const;

  std::int64_t n_ = 0;
  double field_ = 0.0;
  std::vector<double> couplings_;  // row-major N x N ordered-pair couplings
  std::vector<double> weights_;    // a_i * m_i
};

double oracle_expectation(const ModelParams& params, const ObservableSpec& obs,
                          const InitialStateSpec& init, double t, int workers = 0);

TimeSeries oracle_series(const ModelParams& params, const ObservableSpec& obs,
                         const InitialStateSpec& init, const std::vector<double>& times,
                         int workers = 0);

/// max_k |analytic(t_k) - oracle(t_k)| over the grid, hamiltonian_exact mode.
double max_analytic_oracle_deviation(const ModelParams& params,
                                     const DisplacementMultiset& multiset,
                                     const ObservableSpec& obs, const InitialStateSpec& init,
                                     const std::vector<double>& times, int workers = 0);

}  // namespace lrspin
