#include "lrspin/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <map>
#include <sstream>

#include "lrspin/errors.hpp"
#include "lrspin/parallel.hpp"

namespace lrspin {

namespace {

constexpr std::int64_t kSumBlock = std::int64_t{1} << 16;

// FNV-1a over the raw bytes of the canonical parameter string.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string double_bits_hex(double x) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(x));
  std::memcpy(&bits, &x, sizeof(bits));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(bits));
  return buf;
}

}  // namespace

const char* to_string(Metric m) {
  return m == Metric::euclidean ? "euclidean" : "chebyshev";
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::strong_long_range: return "strong_long_range";
    case Regime::marginal: return "marginal";
    default: return "summable";
  }
}

void CouplingLaw::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw ValidationError("coupling law: alpha must be finite and >= 0");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw ValidationError("coupling law: amplitude must be finite and >= 0");
}

double CouplingLaw::strength(double distance) const {
  if (!(distance >= 1.0))
    throw ValidationError("coupling strength: distance must be >= 1");
  if (amplitude == 0.0) return 0.0;
  return amplitude * std::pow(distance, -alpha);
}

double coupling_strength(const CouplingLaw& law, double distance) {
  return law.strength(distance);
}

std::int64_t LatticeSpec::total_sites() const {
  std::int64_t n = 1;
  for (int k = 0; k < dimension; ++k) {
    if (side_length != 0 && n > std::numeric_limits<std::int64_t>::max() / side_length)
      throw ValidationError("lattice: site count overflows");
    n *= side_length;
  }
  return n;
}

void LatticeSpec::validate() const {
  if (dimension < 1 || dimension > 8)
    throw ValidationError("lattice: dimension must be in [1, 8]");
  if (side_length < 2 || side_length % 2 != 0)
    throw ValidationError("lattice: side length must be even and >= 2");
  total_sites();  // overflow check
}

Regime regime_classify(double alpha, int dimension) {
  if (!(alpha >= 0.0)) throw ValidationError("regime: alpha must be >= 0");
  if (dimension < 1) throw ValidationError("regime: dimension must be >= 1");
  const double d = static_cast<double>(dimension);
  if (alpha < d) return Regime::strong_long_range;
  if (alpha == d) return Regime::marginal;
  return Regime::summable;
}

double power_sum(double exponent, std::int64_t count, int workers) {
  if (count <= 0) return 0.0;
  if (exponent == 0.0) return static_cast<double>(count);
  return blocked_sum(count, kSumBlock, workers, [exponent](std::int64_t i) {
    return std::pow(static_cast<double>(i + 1), -exponent);
  });
}

double riemann_zeta(double s) {
  if (!(s > 1.0)) throw ValidationError("zeta: defined here for s > 1 only");
  constexpr int kDirect = 32;
  KahanSum acc;
  for (int j = 1; j <= kDirect; ++j) acc.add(std::pow(static_cast<double>(j), -s));
  const double m = static_cast<double>(kDirect);
  const double ms = std::pow(m, -s);
  double tail = std::pow(m, 1.0 - s) / (s - 1.0) - ms / 2.0;
  tail += s / 12.0 * ms / m;
  tail -= s * (s + 1.0) * (s + 2.0) / 720.0 * ms / (m * m * m);
  tail += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 * ms / (m * m * m * m * m);
  return acc.value() + tail;
}

namespace {

// Streams every non-reference site of the torus as (strength, self_paired),
// accumulating the per-site Kac sum. Shared by normalization() so that it
// agrees with the multiset to rounding error without materializing entries.
double kac_sum_streamed(const LatticeSpec& lattice, const CouplingLaw& law) {
  const std::int64_t n = lattice.total_sites();
  if (lattice.dimension == 1) {
    const std::int64_t half = n / 2;
    // 2 * sum_{j=1..N/2} eps(j): antipodal strength counted twice.
    return 2.0 * law.amplitude * power_sum(law.alpha, half);
  }
  const std::int64_t l = lattice.side_length;
  const int d = lattice.dimension;
  const Metric metric = lattice.metric;
  const double alpha = lattice.metric == Metric::euclidean ? law.alpha / 2.0 : law.alpha;
  return law.amplitude *
         blocked_sum(n - 1, kSumBlock, 0, [&, l, d, metric, alpha](std::int64_t idx) {
           std::int64_t v = idx + 1;  // flat site index, skipping the origin
           std::int64_t key = 0;
           bool self = true;
           for (int k = 0; k < d; ++k) {
             const std::int64_t c = v % l;
             v /= l;
             const std::int64_t m = std::min(c, l - c);
             if (c != 0 && c != l / 2) self = false;
             if (metric == Metric::euclidean)
               key += m * m;
             else
               key = std::max(key, m);
           }
           const double eps = std::pow(static_cast<double>(key), -alpha);
           return self ? 2.0 * eps : eps;
         });
}

}  // namespace

double normalization(const LatticeSpec& lattice, const CouplingLaw& law) {
  lattice.validate();
  law.validate();
  if (lattice.total_sites() > kEnumerationCap)
    throw ResourceCapError("normalization: lattice exceeds enumeration cap 2^26");
  if (law.amplitude == 0.0) return 1.0;  // couplings off: factor is inert
  return 1.0 / kac_sum_streamed(lattice, law);
}

double normalization_asymptotic(double alpha, std::int64_t n_sites, int dimension) {
  if (dimension != 1)
    throw ValidationError("normalization_asymptotic: stated for the chain (d = 1) only");
  if (!(alpha >= 0.0)) throw ValidationError("normalization_asymptotic: alpha must be >= 0");
  if (n_sites < 4) throw ValidationError("normalization_asymptotic: N must be >= 4");
  const double n = static_cast<double>(n_sites);
  if (alpha < 1.0) return (1.0 - alpha) * std::pow(2.0, 1.0 - alpha) * std::pow(n, alpha - 1.0);
  if (alpha == 1.0) return 1.0 / std::log(n);
  return 1.0 / riemann_zeta(alpha);
}

DisplacementMultiset displacement_multiset(const LatticeSpec& lattice, const CouplingLaw& law) {
  lattice.validate();
  law.validate();
  const std::int64_t n = lattice.total_sites();
  if (n > kEnumerationCap)
    throw ResourceCapError("displacement multiset: lattice exceeds enumeration cap 2^26");

  DisplacementMultiset ms;
  if (lattice.dimension == 1) {
    const std::int64_t half = n / 2;
    ms.entries.resize(static_cast<std::size_t>(half));
    const double alpha = law.alpha;
    const double c = law.amplitude;
    parallel_for(half, 0, [&](std::int64_t i) {
      const std::int64_t j = i + 1;
      ms.entries[static_cast<std::size_t>(i)] = DisplacementEntry{
          c * std::pow(static_cast<double>(j), -alpha),
          j == half ? 1u : 2u,
          j == half};
    });
  } else {
    const std::int64_t l = lattice.side_length;
    const int d = lattice.dimension;
    // Group by the integer distance key (squared Euclidean norm or Chebyshev
    // norm of the minimum-image vector), self-paired classes kept separate.
    std::map<std::pair<std::int64_t, bool>, std::int64_t> groups;
    for (std::int64_t idx = 1; idx < n; ++idx) {
      std::int64_t v = idx;
      std::int64_t key = 0;
      bool self = true;
      for (int k = 0; k < d; ++k) {
        const std::int64_t c = v % l;
        v /= l;
        const std::int64_t m = std::min(c, l - c);
        if (c != 0 && c != l / 2) self = false;
        if (lattice.metric == Metric::euclidean)
          key += m * m;
        else
          key = std::max(key, m);
      }
      ++groups[{key, self}];
    }
    const double alpha = lattice.metric == Metric::euclidean ? law.alpha / 2.0 : law.alpha;
    ms.entries.reserve(groups.size());
    for (const auto& [key, count] : groups) {
      ms.entries.push_back(DisplacementEntry{
          law.amplitude * std::pow(static_cast<double>(key.first), -alpha),
          static_cast<std::uint32_t>(count),
          key.second});
    }
  }

  KahanSum s1, s2, kac;
  for (const auto& e : ms.entries) {
    const double m = static_cast<double>(e.multiplicity);
    s1.add(m * e.strength);
    s2.add(m * e.strength * e.strength);
    kac.add(m * (e.self_paired ? 2.0 * e.strength : e.strength));
    ms.max_effective_strength = std::max(ms.max_effective_strength, e.effective_strength());
    ms.total_multiplicity += e.multiplicity;
  }
  ms.sum_strength = s1.value();
  ms.sum_strength_squared = s2.value();
  ms.kac_sum = kac.value();
  return ms;
}

ModelParams make_model(const LatticeSpec& lattice, const CouplingLaw& law, double field_h) {
  if (!std::isfinite(field_h)) throw ValidationError("model: field h must be finite");
  ModelParams p;
  p.lattice = lattice;
  p.law = law;
  p.field = field_h;
  p.normalization = lrspin::normalization(lattice, law);
  return p;
}

std::string params_digest(const ModelParams& params) {
  std::ostringstream os;
  os << "v1|d=" << params.lattice.dimension << "|L=" << params.lattice.side_length
     << "|metric=" << to_string(params.lattice.metric)
     << "|alpha=" << double_bits_hex(params.law.alpha)
     << "|C=" << double_bits_hex(params.law.amplitude)
     << "|h=" << double_bits_hex(params.field);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(os.str())));
  return buf;
}

}  // namespace lrspin
