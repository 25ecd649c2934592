#include "qkdbudget/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <fmt/format.h>

#include "qkdbudget/errors.hpp"
#include "qkdbudget/parallel.hpp"

namespace qkdbudget {
namespace {

constexpr std::uint64_t kShardPulses = 65536;
constexpr double kPoissonChunk = 256.0;
constexpr int kMaxSeriesTerms = 5000;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t shard) {
  std::uint64_t state = seed ^ (shard * 0xD1B54A32D192ED03ULL);
  splitmix64(state);
  return splitmix64(state);
}

// Portable uniform on [0, 1) from the top 53 bits.
double uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Poisson sampler by sequential inversion; large means are split into
// chunks (a sum of independent Poisson variates is Poisson).
class PoissonSampler {
 public:
  explicit PoissonSampler(double mean) {
    int chunks = mean > kPoissonChunk ? static_cast<int>(std::ceil(mean / kPoissonChunk)) : 1;
    chunk_mean_ = mean / chunks;
    chunks_ = chunks;
    zero_prob_ = std::exp(-chunk_mean_);
  }

  std::uint64_t operator()(std::mt19937_64& gen) const {
    std::uint64_t total = 0;
    for (int c = 0; c < chunks_; ++c) {
      const double u = uniform(gen);
      double p = zero_prob_;
      double cdf = p;
      std::uint64_t k = 0;
      while (u >= cdf && p > 0.0) {
        ++k;
        p *= chunk_mean_ / static_cast<double>(k);
        cdf += p;
      }
      total += k;
    }
    return total;
  }

 private:
  double chunk_mean_ = 0;
  int chunks_ = 1;
  double zero_prob_ = 1;
};

SimulationOutcome simulate_shard(std::uint64_t pulses, const LinkParameters& link,
                                 std::uint64_t seed, std::uint64_t shard) {
  std::mt19937_64 gen(shard_seed(seed, shard));
  const PoissonSampler photons(link.source.mu);
  const double survive = link.channel.alpha * link.detector.eta;
  const double r_c = link.channel.r_c;
  const double r_d = link.detector.r_d;

  SimulationOutcome out;
  out.pulses = pulses;
  for (std::uint64_t p = 0; p < pulses; ++p) {
    const std::uint64_t emitted = photons(gen);
    std::uint64_t detected = 0;
    for (std::uint64_t k = 0; k < emitted; ++k) {
      if (uniform(gen) < survive) ++detected;
    }
    const bool dark = uniform(gen) < r_d;
    if (detected == 0 && !dark) continue;
    if (uniform(gen) >= 0.5) continue;  // basis mismatch

    ++out.sifted;
    if (dark) {
      ++out.sifted_single_photon;
      if (uniform(gen) < 0.5) {
        ++out.errors;
        ++out.errors_single_photon;
      }
    } else {
      const bool wrong = uniform(gen) < r_c;
      if (wrong) ++out.errors;
      if (detected == 1) {
        ++out.sifted_single_photon;
        if (wrong) ++out.errors_single_photon;
      }
    }
  }
  return out;
}

double yield(int j, Probability y, Strategy strategy) {
  if (strategy == Strategy::indirect) return -std::expm1((j - 1) * std::log1p(-y));
  if (j == 2) return y;
  return 1.0 - std::exp2(1 - (j + 1) / 2);
}

template <typename PickYield>
double series_sum(double mu, double tol, PickYield&& pick) {
  if (!(mu > 0.0)) throw DomainError("nu_series needs mu > 0");
  if (!(tol > 0.0)) throw DomainError("nu_series needs tol > 0");
  double sum = 0.0;
  for (int j = 2; j < kMaxSeriesTerms; ++j) {
    if (poisson_tail(mu, j) < tol) break;
    sum += poisson_pmf(mu, j) * pick(j);
  }
  return sum;
}

void require_y(Probability y) {
  if (!(y > 0.0 && y <= 1.0)) throw DomainError(fmt::format("y must lie in (0,1], got {}", y));
}

}  // namespace

SimulationOutcome simulate_block(std::uint64_t m, const LinkParameters& link,
                                 std::uint64_t seed, unsigned threads) {
  if (m > kMaxSimulatedPulses) {
    throw ResourceError(
        fmt::format("simulate_block: {} pulses exceeds the limit of {}", m, kMaxSimulatedPulses));
  }
  // An empty source (mu = 0) is a meaningful simulation input.
  LinkParameters checked = link;
  if (checked.source.mu == 0.0) checked.source.mu = 1.0;
  validate(checked);

  const std::uint64_t shards = (m + kShardPulses - 1) / kShardPulses;
  std::vector<SimulationOutcome> parts(shards);
  parallel_for(shards, threads, [&](std::size_t s) {
    const std::uint64_t begin = s * kShardPulses;
    const std::uint64_t count = std::min(kShardPulses, m - begin);
    parts[s] = simulate_shard(count, link, seed, s);
  });

  SimulationOutcome total;
  total.seed = seed;
  for (const auto& part : parts) {
    total.pulses += part.pulses;
    total.sifted += part.sifted;
    total.errors += part.errors;
    total.sifted_single_photon += part.sifted_single_photon;
    total.errors_single_photon += part.errors_single_photon;
  }
  return total;
}

std::string_view to_string(Strategy strategy) {
  return strategy == Strategy::indirect ? "indirect" : "direct";
}

PerPulseInfo per_pulse_info(int j, Probability y, Strategy strategy) {
  if (j < 2) throw DomainError("per_pulse_info needs j >= 2");
  require_y(y);
  return {j, strategy, yield(j, y, strategy)};
}

double nu_series(double mu, Probability y, RegimeLabel regime, double tol) {
  require_y(y);
  switch (regime) {
    case RegimeLabel::indirect:
      return nu_series_fixed(mu, y, Strategy::indirect, tol);
    case RegimeLabel::direct:
      return nu_series_fixed(mu, y, Strategy::direct, tol);
    case RegimeLabel::adaptive:
      break;
  }
  return series_sum(mu, tol, [y](int j) {
    return std::max(yield(j, y, Strategy::indirect), yield(j, y, Strategy::direct));
  });
}

double nu_series_fixed(double mu, Probability y, Strategy strategy, double tol) {
  require_y(y);
  return series_sum(mu, tol, [y, strategy](int j) { return yield(j, y, strategy); });
}

}  // namespace qkdbudget
