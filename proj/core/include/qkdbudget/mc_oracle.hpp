#pragma once

#include <cstdint>
#include <string_view>

#include "qkdbudget/budget.hpp"
#include "qkdbudget/parameters.hpp"

namespace qkdbudget {

// Identifier of the stream construction used by simulate_block. Outcomes for
// a given (m, link, seed) are fixed by this algorithm alone.
inline constexpr std::string_view kSimulationAlgorithm =
    "mt19937_64/splitmix64(seed,shard)/shard=65536/poisson-inversion";

inline constexpr std::uint64_t kMaxSimulatedPulses = 100'000'000;

struct SimulationOutcome {
  std::uint64_t pulses = 0;
  std::uint64_t sifted = 0;
  std::uint64_t errors = 0;
  std::uint64_t sifted_single_photon = 0;
  std::uint64_t errors_single_photon = 0;
  std::uint64_t seed = 0;
  std::string_view algorithm = kSimulationAlgorithm;

  bool operator==(const SimulationOutcome&) const = default;
};

// Pulse-by-pulse simulation of m pulses. Each pulse draws a Poisson photon
// number, thins every photon by alpha * eta, fires a dark count with
// probability r_d and survives sifting with probability 1/2. A pulse with a
// dark count yields a random bit and counts as a single click; otherwise the
// bit is wrong with probability r_c. The pulses are split into fixed-size
// shards with independent streams, so the result does not depend on
// `threads`.
SimulationOutcome simulate_block(std::uint64_t m, const LinkParameters& link,
                                 std::uint64_t seed, unsigned threads = 0);

enum class Strategy { indirect, direct };

std::string_view to_string(Strategy strategy);

struct PerPulseInfo {
  int j = 2;
  Strategy strategy = Strategy::indirect;
  Bits bits = 0;
};

// Eve's information from one pulse of j >= 2 photons:
//   indirect: 1 - (1-y)^(j-1)
//   direct:   y for j = 2, 1 - 2^(1 - ceil(j/2)) for j >= 3
PerPulseInfo per_pulse_info(int j, Probability y, Strategy strategy);

// Multi-photon leakage per pulse pair (nu / (m/2)) by summing psi_j(mu) times
// the per-pulse yield. The adaptive regime takes the per-j maximum of both
// strategies. Summation stops once psi_{>=j}(mu) < tol.
double nu_series(double mu, Probability y, RegimeLabel regime, double tol = 1e-16);

// Same sum with a fixed strategy for every photon number.
double nu_series_fixed(double mu, Probability y, Strategy strategy, double tol = 1e-16);

}  // namespace qkdbudget
