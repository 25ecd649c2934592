#pragma once

// Special-function kernel: Poisson photon-number statistics, binary entropy,
// inverse error function and the two single-photon attack helpers.
//
// Every function is pure and throws DomainError on arguments outside its
// domain.

namespace qkdbudget {

// A probability in [0, 1].
using Probability = double;
// An expected amount of information in bits. May be non-integer.
using Bits = double;

// e^{-mean} mean^count / count!
Probability poisson_pmf(double mean, int count);

// Probability of `k` or more photons in a Poisson pulse with the given mean.
// Evaluated without cancellation for small means.
Probability poisson_tail(double mean, int k);

// Shannon entropy of a biased bit; h(0) = h(1) = 0.
Bits binary_entropy(Probability p);

// w such that erf(w) = z, for |z| < 1.
double inverse_erf(double z);

// Statistical margin on the single-photon error rate,
// erfinv(1 - epsilon) / sqrt(2 n1). Zero when epsilon == 1.
// Throws InfeasibleError for epsilon == 0.
double attack_margin_xi(double n1, Probability epsilon);

// Maximum Renyi information per attacked single-photon bit at error rate
// zeta. Saturates at one bit for zeta >= 1/3.
Bits renyi_info_max(double zeta);

}  // namespace qkdbudget
