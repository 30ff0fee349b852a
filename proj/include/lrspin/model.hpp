#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lrspin {

enum class Metric { euclidean, chebyshev };
enum class Regime { strong_long_range, marginal, summable };

const char* to_string(Metric m);
const char* to_string(Regime r);

/// Hard cap on lattices that are enumerated site by site.
inline constexpr std::int64_t kEnumerationCap = std::int64_t{1} << 26;

/// Algebraic pair-coupling decay eps(r) = C * r^(-alpha) for lattice distance r >= 1.
/// amplitude == 0 is the documented switch that turns all couplings off.
struct CouplingLaw {
  double alpha = 0.0;
  double amplitude = 1.0;

  double strength(double distance) const;
  void validate() const;
};

double coupling_strength(const CouplingLaw& law, double distance);

/// Periodic hypercubic lattice, L sites per axis, N = L^d total. L must be even
/// so the antipodal displacement class is well defined; odd sizes are rejected.
struct LatticeSpec {
  int dimension = 1;
  std::int64_t side_length = 0;
  Metric metric = Metric::euclidean;

  std::int64_t total_sites() const;
  void validate() const;
};

/// One displacement class of the torus: all sites at equal coupling strength
/// from a reference site. self_paired marks classes fixed by negation (v == -v);
/// their multiplicity counts sites, and their effective coupling is doubled.
struct DisplacementEntry {
  double strength = 0.0;
  std::uint32_t multiplicity = 0;
  bool self_paired = false;

  double effective_strength() const { return self_paired ? 2.0 * strength : strength; }
};

/// Per-site neighbor structure grouped by coupling strength, ordered by
/// increasing lattice distance. The multiplicities sum to N - 1.
struct DisplacementMultiset {
  std::vector<DisplacementEntry> entries;
  double sum_strength = 0.0;          // sum of multiplicity * strength
  double sum_strength_squared = 0.0;  // sum of multiplicity * strength^2
  double kac_sum = 0.0;               // as sum_strength but self-paired strengths doubled
  double max_effective_strength = 0.0;
  std::int64_t total_multiplicity = 0;
};

DisplacementMultiset displacement_multiset(const LatticeSpec& lattice, const CouplingLaw& law);

/// Kac normalization factor: inverse of the per-site coupling sum, with
/// self-paired strengths entering twice (the antipodal bond appears twice in
/// the Hamiltonian's double sum). In one dimension this is exactly
/// (2 * sum_{j=1..N/2} eps(j))^(-1). Returns 1 when couplings are switched off.
double normalization(const LatticeSpec& lattice, const CouplingLaw& law);

/// Large-N limit form of 2*N_N for the chain: (1-alpha)*2^(1-alpha)*N^(alpha-1)
/// for alpha < 1, 1/ln N at alpha == 1, 1/zeta(alpha) above. Chain only.
double normalization_asymptotic(double alpha, std::int64_t n_sites, int dimension = 1);

/// strong_long_range for alpha < d, marginal at alpha == d, summable above.
Regime regime_classify(double alpha, int dimension);

/// Immutable per-run parameter bundle; normalization is derived and cached.
struct ModelParams {
  LatticeSpec lattice;
  CouplingLaw law;
  double field = 0.0;  // h
  double normalization = 1.0;
};

ModelParams make_model(const LatticeSpec& lattice, const CouplingLaw& law, double field_h);

/// Short stable hex digest of the physical parameters, embedded in outputs.
std::string params_digest(const ModelParams& params);

/// sum_{j=1}^{count} j^(-exponent), exact blocked-compensated summation.
double power_sum(double exponent, std::int64_t count, int workers = 0);

/// Riemann zeta for s > 1, direct series plus Euler-Maclaurin tail (~1e-15).
double riemann_zeta(double s);

}  // namespace lrspin
