#include "lrspin/oracle.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "lrspin/errors.hpp"
#include "lrspin/parallel.hpp"

namespace lrspin {

namespace {

constexpr std::int64_t kBlockSize = 4096;

void check_oracle_size(const ModelParams& params) {
  params.lattice.validate();
  if (params.lattice.total_sites() > kOracleMaxSites)
    throw ResourceCapError("oracle: enumeration is capped at 24 sites");
}

std::vector<std::int64_t> site_coords(const LatticeSpec& lattice, std::int64_t site) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(lattice.dimension));
  for (int k = 0; k < lattice.dimension; ++k) {
    c[static_cast<std::size_t>(k)] = site % lattice.side_length;
    site /= lattice.side_length;
  }
  return c;
}

struct PairGeometry {
  double distance = 0.0;
  bool self_paired = false;  // displacement class fixed by negation
};

PairGeometry pair_geometry(const LatticeSpec& lattice, std::int64_t from, std::int64_t to) {
  const std::int64_t l = lattice.side_length;
  const auto a = site_coords(lattice, from);
  const auto b = site_coords(lattice, to);
  std::int64_t key = 0;
  bool self = true;
  for (int k = 0; k < lattice.dimension; ++k) {
    const std::int64_t c = ((b[static_cast<std::size_t>(k)] - a[static_cast<std::size_t>(k)]) % l + l) % l;
    const std::int64_t m = std::min(c, l - c);
    if (c != 0 && c != l / 2) self = false;
    if (lattice.metric == Metric::euclidean)
      key += m * m;
    else
      key = std::max(key, m);
  }
  const double r = lattice.metric == Metric::euclidean
                       ? std::sqrt(static_cast<double>(key))
                       : static_cast<double>(key);
  return {r, self};
}

// Displacement representatives of the literal Hamiltonian sum: one of {v, -v}
// per class, plus every self-paired v (which the site sum then counts twice,
// as written). In one dimension this is exactly j = 1 .. N/2.
std::vector<std::int64_t> half_space_offsets(const LatticeSpec& lattice) {
  const std::int64_t n = lattice.total_sites();
  const std::int64_t l = lattice.side_length;
  std::vector<std::int64_t> offsets;
  for (std::int64_t v = 1; v < n; ++v) {
    std::int64_t neg = 0, stride = 1, rest = v;
    for (int k = 0; k < lattice.dimension; ++k) {
      const std::int64_t c = rest % l;
      rest /= l;
      neg += ((l - c) % l) * stride;
      stride *= l;
    }
    if (v <= neg) offsets.push_back(v);
  }
  return offsets;
}

std::int64_t shift_site(const LatticeSpec& lattice, std::int64_t site, std::int64_t offset,
                        int direction) {
  const std::int64_t l = lattice.side_length;
  std::int64_t out = 0, stride = 1;
  for (int k = 0; k < lattice.dimension; ++k) {
    const std::int64_t cs = site % l;
    const std::int64_t co = offset % l;
    site /= l;
    offset /= l;
    out += ((cs + direction * co) % l + l) % l * stride;
    stride *= l;
  }
  return out;
}

}  // namespace

double configuration_energy(const ModelParams& params, ZConfiguration s) {
  check_oracle_size(params);
  const std::int64_t n = params.lattice.total_sites();
  const auto offsets = half_space_offsets(params.lattice);
  KahanSum coupling;
  for (std::int64_t v : offsets) {
    const auto geo = pair_geometry(params.lattice, 0, v);
    const double eps = params.law.amplitude == 0.0 ? 0.0 : params.law.strength(geo.distance);
    for (std::int64_t i = 0; i < n; ++i) {
      const std::int64_t j = shift_site(params.lattice, i, v, +1);
      coupling.add(eps * s.spin(static_cast<int>(i)) * s.spin(static_cast<int>(j)));
    }
  }
  std::int64_t mag = 0;
  for (std::int64_t i = 0; i < n; ++i) mag += s.spin(static_cast<int>(i));
  return params.normalization * coupling.value() - params.field * static_cast<double>(mag);
}

double flip_energy_gap(const ModelParams& params, ZConfiguration s, int site) {
  check_oracle_size(params);
  const std::int64_t n = params.lattice.total_sites();
  if (site < 0 || site >= n) throw ValidationError("flip gap: site index out of range");
  const auto offsets = half_space_offsets(params.lattice);
  KahanSum neighbor;
  for (std::int64_t v : offsets) {
    const auto geo = pair_geometry(params.lattice, 0, v);
    const double eps = params.law.amplitude == 0.0 ? 0.0 : params.law.strength(geo.distance);
    const std::int64_t fwd = shift_site(params.lattice, site, v, +1);
    const std::int64_t bwd = shift_site(params.lattice, site, v, -1);
    neighbor.add(eps * (s.spin(static_cast<int>(fwd)) + s.spin(static_cast<int>(bwd))));
  }
  const double sk = s.spin(site);
  return -2.0 * sk * params.normalization * neighbor.value() + 2.0 * params.field * sk;
}

OracleEngine::OracleEngine(const ModelParams& params, const ObservableSpec& obs,
                           const InitialStateSpec& init) {
  check_oracle_size(params);
  n_ = params.lattice.total_sites();
  field_ = params.field;
  obs.validate(n_);
  init.validate(n_);
  weights_.resize(static_cast<std::size_t>(n_));
  for (std::int64_t i = 0; i < n_; ++i)
    weights_[static_cast<std::size_t>(i)] =
        obs.coefficients[static_cast<std::size_t>(i)] *
        init.site_x_expectations[static_cast<std::size_t>(i)];

  couplings_.assign(static_cast<std::size_t>(n_ * n_), 0.0);
  for (std::int64_t k = 0; k < n_; ++k) {
    for (std::int64_t l = 0; l < n_; ++l) {
      if (k == l) continue;
      const auto geo = pair_geometry(params.lattice, k, l);
      const double eps = params.law.amplitude == 0.0 ? 0.0 : params.law.strength(geo.distance);
      couplings_[static_cast<std::size_t>(k * n_ + l)] =
          params.normalization * eps * (geo.self_paired ? 2.0 : 1.0);
    }
  }
}

OracleEngine::BlockSums OracleEngine::run_block(std::int64_t g_begin, std::int64_t g_end,
                                                double t) const {
  const int n = static_cast<int>(n_);
  std::vector<double> spin(static_cast<std::size_t>(n));
  std::vector<double> gap(static_cast<std::size_t>(n));
  const std::uint32_t start_bits =
      static_cast<std::uint32_t>(g_begin) ^ (static_cast<std::uint32_t>(g_begin) >> 1);
  for (int k = 0; k < n; ++k)
    spin[static_cast<std::size_t>(k)] = (start_bits >> k) & 1u ? -1.0 : 1.0;
  for (int k = 0; k < n; ++k) {
    double g = 0.0;
    const double* row = couplings_.data() + static_cast<std::size_t>(k) * n_;
    for (int l = 0; l < n; ++l) g += row[l] * spin[static_cast<std::size_t>(l)];
    gap[static_cast<std::size_t>(k)] =
        spin[static_cast<std::size_t>(k)] * (-2.0 * g + 2.0 * field_);
  }

  KahanSum cos_sum, sin_sum;
  for (std::int64_t g = g_begin; g < g_end; ++g) {
    double c = 0.0, s = 0.0;
    for (int k = 0; k < n; ++k) {
      const double arg = gap[static_cast<std::size_t>(k)] * t;
      c += weights_[static_cast<std::size_t>(k)] * std::cos(arg);
      s += weights_[static_cast<std::size_t>(k)] * std::sin(arg);
    }
    cos_sum.add(c);
    sin_sum.add(s);
    if (g + 1 < g_end) {
      const int p = std::countr_zero(static_cast<std::uint32_t>(g + 1));
      const double sp = spin[static_cast<std::size_t>(p)];
      const double* row = couplings_.data() + static_cast<std::size_t>(p) * n_;
      for (int k = 0; k < n; ++k)  // row[p] == 0, so k == p is a no-op
        gap[static_cast<std::size_t>(k)] +=
            4.0 * spin[static_cast<std::size_t>(k)] * row[k] * sp;
      gap[static_cast<std::size_t>(p)] = -gap[static_cast<std::size_t>(p)];
      spin[static_cast<std::size_t>(p)] = -sp;
    }
  }
  return {cos_sum.value(), sin_sum.value()};
}

double OracleEngine::expectation(double t, int workers) const {
  if (!std::isfinite(t)) throw ValidationError("oracle: t must be finite");
  const std::int64_t n_configs = std::int64_t{1} << n_;
  const std::int64_t n_blocks = (n_configs + kBlockSize - 1) / kBlockSize;
  std::vector<BlockSums> partials(static_cast<std::size_t>(n_blocks));
  for_each_block(n_configs, kBlockSize, workers,
                 [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
                   partials[static_cast<std::size_t>(b)] = run_block(lo, hi, t);
                 });
  KahanSum cos_total, sin_total;
  for (const auto& p : partials) {
    cos_total.add(p.cos_sum);
    sin_total.add(p.sin_sum);
  }

  double w_scale = 1.0;
  for (double w : weights_) w_scale = std::max(w_scale, std::fabs(w));
  const double scale = static_cast<double>(n_configs);
  if (std::fabs(sin_total.value()) > 1e-12 * scale * w_scale)
    throw std::logic_error("oracle: imaginary parts failed to cancel");
  return cos_total.value() / scale;
}

double oracle_expectation(const ModelParams& params, const ObservableSpec& obs,
                          const InitialStateSpec& init, double t, int workers) {
  return OracleEngine(params, obs, init).expectation(t, workers);
}

TimeSeries oracle_series(const ModelParams& params, const ObservableSpec& obs,
                         const InitialStateSpec& init, const std::vector<double>& times,
                         int workers) {
  if (times.empty()) throw ValidationError("oracle series: empty time grid");
  const OracleEngine engine(params, obs, init);
  TimeSeries s;
  s.times = times;
  s.values.resize(times.size());
  s.mode = EvalMode::hamiltonian_exact;
  s.digest = params_digest(params);
  parallel_for(static_cast<std::int64_t>(times.size()), workers, [&](std::int64_t i) {
    s.values[static_cast<std::size_t>(i)] = engine.expectation(times[static_cast<std::size_t>(i)], 1);
  });
  return s;
}

double max_analytic_oracle_deviation(const ModelParams& params,
                                     const DisplacementMultiset& multiset,
                                     const ObservableSpec& obs, const InitialStateSpec& init,
                                     const std::vector<double>& times, int workers) {
  const OracleEngine engine(params, obs, init);
  const AmplitudeEvaluator eval(params, multiset, EvalMode::hamiltonian_exact);
  const double a0 = initial_expectation(obs, init);
  const double two_h = 2.0 * params.field;
  std::vector<double> dev(times.size());
  parallel_for(static_cast<std::int64_t>(times.size()), workers, [&](std::int64_t i) {
    const double t = times[static_cast<std::size_t>(i)];
    const double analytic = a0 * std::cos(two_h * t) * eval(t);
    dev[static_cast<std::size_t>(i)] = std::fabs(analytic - engine.expectation(t, 1));
  });
  double m = 0.0;
  for (double d : dev) m = std::max(m, d);
  return m;
}

}  // namespace lrspin
