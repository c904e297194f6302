#include "vdc/kernel_features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "vdc/error.hpp"
#include "vdc/parallel.hpp"

namespace vdc {

Dataset kernel_map(const Dataset& ds, const KernelFeatureConfig& cfg) {
  if (!(cfg.sigma > 0.0)) throw ConfigError("kernel sigma must be positive");
  if (cfg.d_prime == 0) throw ConfigError("kernel d' must be at least 1");
  if (cfg.target_metric == Metric::cosine) throw ConfigError("kernel map targets l2 or l1 only");
  if (ds.metric() && *ds.metric() != cfg.target_metric) {
    throw ConfigError("dataset metric " + std::string(to_string(*ds.metric())) +
                      " does not match kernel target " + std::string(to_string(cfg.target_metric)));
  }

  const std::size_t d = ds.d();
  const std::size_t dp = cfg.d_prime;
  std::vector<double> w(dp * d);
  std::mt19937_64 rng(cfg.seed);
  if (cfg.target_metric == Metric::l2) {
    std::normal_distribution<double> dist(0.0, 1.0 / cfg.sigma);
    for (auto& v : w) v = dist(rng);
  } else {
    std::cauchy_distribution<double> dist(0.0, 1.0 / cfg.sigma);
    for (auto& v : w) v = dist(rng);
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(dp));
  std::vector<double> out(ds.n() * 2 * dp);
  parallel_for(ds.n(), [&](std::size_t i) {
    auto x = ds.row(i);
    double* o = out.data() + i * 2 * dp;
    for (std::size_t f = 0; f < dp; ++f) {
      const double a = dot({w.data() + f * d, d}, x);
      o[2 * f] = std::sin(a) * scale;
      o[2 * f + 1] = std::cos(a) * scale;
    }
  });
  Dataset mapped(ds.n(), 2 * dp, std::move(out), Metric::cosine);
  mapped.mark_normalized(true);
  return mapped;
}

double kernel_value(Metric target, double sigma, std::span<const double> x,
                    std::span<const double> y) {
  switch (target) {
    case Metric::l2: {
      const double dist = distance(Metric::l2, x, y);
      return std::exp(-dist * dist / (2.0 * sigma * sigma));
    }
    case Metric::l1: return std::exp(-distance(Metric::l1, x, y) / sigma);
    case Metric::cosine: break;
  }
  throw ConfigError("no closed-form kernel for cosine");
}

double default_sigma(const Dataset& ds, Metric metric, std::size_t sample, std::uint64_t seed) {
  std::vector<std::size_t> ids(ds.n());
  std::iota(ids.begin(), ids.end(), 0);
  if (ds.n() > sample) {
    std::mt19937_64 rng(seed);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(sample);
  }
  if (ids.size() < 2) return 1.0;
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < ids.size(); ++a) {
    for (std::size_t b = a + 1; b < ids.size(); ++b) {
      total += distance(metric, ds.row(ids[a]), ds.row(ids[b]));
      ++pairs;
    }
  }
  const double mean = total / static_cast<double>(pairs);
  return mean > 0.0 ? mean : 1.0;
}

}  // namespace vdc
