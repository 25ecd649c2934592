#include "qkdbudget/budget.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "qkdbudget/errors.hpp"
#include "scenarios.hpp"

namespace qkdbudget {
namespace {

using testing::golden_link;
using testing::golden_security;
using testing::rel_diff;

// Detector/channel pair with a given detected mean eta*mu*alpha.
struct Optics {
  SourceModel source;
  ChannelModel channel;
  DetectorModel detector;
};

Optics optics_with_mean(double detected_mean, double r_c, double r_d) {
  return {{detected_mean, 1e-9}, {1.0, r_c, Medium::fiber}, {1.0, r_d}};
}

TEST(SiftedLength, Examples) {
  auto dark = optics_with_mean(0.0, 0.0, 0.0);
  EXPECT_EQ(sifted_length(1e6, dark.source, dark.channel, dark.detector), 0.0);
  auto bright = optics_with_mean(1e9, 0.0, 0.0);
  EXPECT_EQ(sifted_length(1e6, bright.source, bright.channel, bright.detector), 5e5);
  auto o = optics_with_mean(0.1, 0.0, 1e-5);
  EXPECT_NEAR(sifted_length(2e6, o.source, o.channel, o.detector), 95171.630338220786, 1e-9);
}

TEST(ErrorCount, Examples) {
  auto clean = optics_with_mean(0.1, 0.0, 0.0);
  EXPECT_EQ(error_count(2e6, clean.source, clean.channel, clean.detector), 0.0);
  auto o = optics_with_mean(0.1, 0.01, 0.0);
  EXPECT_NEAR(error_count(2e6, o.source, o.channel, o.detector), 951.625819640404268, 1e-10);
  auto dark = optics_with_mean(0.0, 0.01, 1e-4);
  // (m/2)(r_d/2): dark counts are wrong half the time.
  EXPECT_NEAR(error_count(2e6, dark.source, dark.channel, dark.detector), 50.0, 1e-10);
}

TEST(SinglePhotonCounts, Examples) {
  auto dark = optics_with_mean(0.0, 0.01, 0.0);
  auto none = single_photon_counts(1e6, dark.source, dark.channel, dark.detector);
  EXPECT_EQ(none.n1, 0.0);
  EXPECT_EQ(none.e_T1, 0.0);

  auto o = optics_with_mean(0.1, 0.01, 0.0);
  auto c = single_photon_counts(2e6, o.source, o.channel, o.detector);
  EXPECT_NEAR(c.n1, 90483.7418035959573, 1e-9);
  EXPECT_NEAR(c.e_T1, 904.837418035959573, 1e-11);

  auto half = optics_with_mean(0.3, 0.5, 0.0);
  auto h = single_photon_counts(1e6, half.source, half.channel, half.detector);
  EXPECT_DOUBLE_EQ(h.e_T1, h.n1 / 2.0);
}

TEST(EcLeakage, Examples) {
  EXPECT_DOUBLE_EQ(ec_leakage(1000, 500, 1.0), 1000.0);
  EXPECT_EQ(ec_leakage(1000, 0, 1.2), 0.0);
  EXPECT_EQ(ec_leakage(0, 0, 1.2), 0.0);
  EXPECT_NEAR(ec_leakage(1000, 50, 1.2), 343.67634853914735, 1e-11);
  EXPECT_THROW(ec_leakage(10, 11, 1.0), DomainError);
}

TEST(EcLeakage, AtLeastShannonMinimum) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double n = 1.0 + 1e6 * u(rng);
    const double e = n * 0.5 * u(rng);
    const double q_min = ec_leakage_min(n, e);
    EXPECT_EQ(ec_leakage(n, e, 1.0), q_min);
    if (e > 0) EXPECT_GT(ec_leakage(n, e, 1.0 + 1e-3 + u(rng)), q_min);
  }
}

TEST(SinglePhotonAttackBound, Examples) {
  EXPECT_EQ(single_photon_attack_bound(100, 0, 1.0), 0.0);
  EXPECT_NEAR(single_photon_attack_bound(100, 0, 0.01), 71.750725409127673, 1e-12);
  // zeta = 0.3 + xi lies in the saturated region.
  EXPECT_NEAR(single_photon_attack_bound(100, 30, 0.01), 80.775467067272363, 1e-12);
  EXPECT_EQ(single_photon_attack_bound(0, 0, 0.01), 0.0);
  EXPECT_THROW(single_photon_attack_bound(10, 11, 0.01), DomainError);
  EXPECT_THROW(single_photon_attack_bound(10, 1, 0.0), InfeasibleError);
}

TEST(SinglePhotonAttackBound, MonotoneInErrorsAndEpsilon) {
  // (n1 - e_T1) I(e_T1/n1 + xi) peaks once the single-photon error rate
  // approaches the saturation point (about 0.18 to 0.28 depending on xi), so
  // monotonicity in e_T1 is checked below that.
  const double n1 = 5000;
  for (double eps : {1.0, 0.3, 1e-2, 1e-6}) {
    double previous = -1.0;
    for (int i = 0; i <= 200; ++i) {
      const double t = single_photon_attack_bound(n1, n1 * 0.15 * i / 200.0, eps);
      EXPECT_GE(t, previous);
      previous = t;
    }
  }
  for (double e1 : {0.0, 50.0, 900.0, 2500.0}) {
    double previous = -1.0;
    for (double eps : {1.0, 0.5, 0.1, 1e-2, 1e-4, 1e-8, 1e-12}) {
      const double t = single_photon_attack_bound(n1, e1, eps);
      EXPECT_GE(t, previous);
      previous = t;
    }
  }
}

TEST(RegimeClassify, ThresholdsMatchStatedValues) {
  EXPECT_NEAR(kIndirectThreshold, 0.29289321881345248, 1e-16);
  EXPECT_NEAR(kDirectThreshold, 0.20629947401590026, 1e-16);
  EXPECT_NEAR(kIndirectThreshold, 0.293, 5e-4);
  EXPECT_NEAR(kDirectThreshold, 0.206, 5e-4);
}

TEST(RegimeClassify, Examples) {
  EXPECT_EQ(regime_classify(0.5).label, RegimeLabel::indirect);
  EXPECT_EQ(regime_classify(0.1).label, RegimeLabel::direct);
  EXPECT_EQ(regime_classify(0.25).label, RegimeLabel::adaptive);
  EXPECT_EQ(regime_classify(kIndirectThreshold).label, RegimeLabel::adaptive);
  EXPECT_EQ(regime_classify(kDirectThreshold).label, RegimeLabel::adaptive);
  EXPECT_THROW(regime_classify(0.0), DomainError);
}

TEST(RegimeClassify, YRuleFollowsCapability) {
  const ChannelModel channel{0.2, 0.0, Medium::free_space};
  const DetectorModel detector{0.6, 0.0};
  EXPECT_DOUBLE_EQ(regime_classify({EveClass::lossless_replacement, {}}, detector, channel).y, 0.6);
  EXPECT_DOUBLE_EQ(regime_classify({EveClass::entanglement_assisted, {}}, detector, channel).y, 0.6);
  EXPECT_DOUBLE_EQ(regime_classify({EveClass::technology_limited, {}}, detector, channel).y, 0.12);
  EXPECT_DOUBLE_EQ(regime_classify({EveClass::technology_limited, 0.4}, detector, channel).y, 0.4);
}

TEST(EveStrengthSigma, Examples) {
  EXPECT_NEAR(eve_strength_sigma(2, kDirectThreshold), 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(eve_strength_sigma(2, 0.25), 1.15625);
  EXPECT_NEAR(eve_strength_sigma(4, 0.25), 0.99030412946428571, 1e-15);
  EXPECT_THROW(eve_strength_sigma(1, 0.25), DomainError);
}

TEST(EveStrengthSigma, BoundaryProperty) {
  for (int i = 1; i < 200; ++i) {
    const double y = kIndirectThreshold + (1.0 - kIndirectThreshold) * i / 200.0;
    for (int k = 2; k <= 40; ++k) EXPECT_GT(eve_strength_sigma(k, y), 1.0) << y << " " << k;
  }
  for (int i = 1; i < 200; ++i) {
    const double y = kDirectThreshold * i / 200.0;
    EXPECT_LT(eve_strength_sigma(2, y), 1.0) << y;
  }
}

TEST(MultiphotonLeakage, ExamplesPerPulsePair) {
  EXPECT_NEAR(multiphoton_leakage(2, 1.0, regime_classify(0.5)), 0.15481812174617547, 1e-15);
  EXPECT_NEAR(multiphoton_leakage(2, 1.0, regime_classify(0.1)), 0.059470108084917281, 1e-15);
  EXPECT_NEAR(multiphoton_leakage(2, 1.0, regime_classify(0.25)), 0.088265076984877628, 1e-15);
  EXPECT_DOUBLE_EQ(multiphoton_leakage(2e6, 1.0, regime_classify(0.5)),
                   1e6 * multiphoton_leakage(2, 1.0, regime_classify(0.5)));
  EXPECT_THROW(multiphoton_leakage(2, 0.0, regime_classify(0.5)), DomainError);
}

TEST(MultiphotonLeakage, FullTransparencyLeaksEveryMultiphotonPulse) {
  for (double mu : {0.01, 0.5, 3.0}) {
    EXPECT_NEAR(multiphoton_leakage(2, mu, regime_classify(1.0)), poisson_tail(mu, 2), 1e-16);
  }
}

TEST(MultiphotonLeakage, RegimeBoundaryContinuity) {
  for (double mu : {0.1, 0.5, 1.0, 2.0}) {
    const double at_high = multiphoton_leakage(2, mu, {RegimeLabel::adaptive, kIndirectThreshold});
    const double indirect = multiphoton_leakage(2, mu, {RegimeLabel::indirect, kIndirectThreshold});
    EXPECT_LE(rel_diff(at_high, indirect), 1e-10) << mu;
    const double at_low = multiphoton_leakage(2, mu, {RegimeLabel::adaptive, kDirectThreshold});
    const double direct = multiphoton_leakage(2, mu, {RegimeLabel::direct, kDirectThreshold});
    EXPECT_LE(rel_diff(at_low, direct), 1e-10) << mu;
  }
}

TEST(MultiphotonLeakage, OnlyAFractionOfMultiphotonPulsesLeaks) {
  for (double mu : {0.05, 0.1, 0.5, 1.0, 2.0, 5.0}) {
    for (double y : {0.05, 0.1, 0.206, 0.25, 0.293, 0.5, 0.9, 0.999}) {
      EXPECT_LT(multiphoton_leakage(2, mu, regime_classify(y)), poisson_tail(mu, 2));
    }
  }
}

TEST(MultiphotonLeakage, MonotoneInYAndMu) {
  for (double mu : {0.02, 0.1, 0.4, 1.0, 3.0}) {
    double previous = 0.0;
    for (int i = 1; i <= 500; ++i) {
      const double v = multiphoton_leakage(2, mu, regime_classify(i / 500.0));
      EXPECT_GE(v, previous - 1e-15 * v) << mu << " " << i;
      previous = v;
    }
  }
  for (double y : {0.05, 0.21, 0.25, 0.29, 0.6}) {
    double previous = 0.0;
    for (int i = 1; i <= 400; ++i) {
      const double v = multiphoton_leakage(2, i * 0.01, regime_classify(y));
      EXPECT_GE(v, previous) << y << " " << i;
      previous = v;
    }
  }
}

TEST(AuthCost, ReferenceValue) {
  const double n = std::exp2(15);
  const double m = std::exp2(20);
  EXPECT_NEAR(auth_cost(n, m, 32, 32, 32), 8828.3297467704724, 1e-9);
}

TEST(AuthCost, SlopeInGAuth) {
  const double n = 4096;
  const double m = 1e6;
  const double g_ec = 40;
  const double g_tilde = 25;
  const double slope = 4.0 * (std::log2(2 * n * (1 + std::log2(m))) + std::log2(2 * n) +
                              std::log2(g_ec) + std::log2(g_tilde));
  for (double g : {2.0, 10.0, 64.0}) {
    const double diff = auth_cost(n, m, g + 1.0, g_ec, g_tilde) - auth_cost(n, m, g, g_ec, g_tilde);
    EXPECT_NEAR(diff, slope, 1e-9);
  }
}

TEST(AuthCost, IncreasesWithSiftedLength) {
  double previous = 0.0;
  for (double n = 4; n < 1e12; n *= 2) {
    const double a = auth_cost(n, 1e12, 30, 30, 30);
    EXPECT_GT(a, previous);
    previous = a;
  }
}

TEST(AuthCost, DomainErrors) {
  EXPECT_THROW(auth_cost(1.0, 1e6, 30, 30, 30), DomainError);
  EXPECT_THROW(auth_cost(0.0, 1e6, 30, 30, 30), DomainError);
  EXPECT_THROW(auth_cost(100, 1e6, 30, 1.0, 30), DomainError);
  EXPECT_THROW(auth_cost(100, 1e6, 30, 30, 0.0), DomainError);
}

TEST(PaInfoBound, Examples) {
  EXPECT_NEAR(pa_info_bound(0), 1.4426950408889634, 1e-15);
  EXPECT_NEAR(pa_info_bound(10), 0.0014088818758681283, 1e-18);
  EXPECT_NEAR(pa_info_bound(30) / 1.3436144598656925e-9, 1.0, 1e-14);
  EXPECT_THROW(pa_info_bound(-1), DomainError);
}

TEST(ComputeLedger, GoldenScenario) {
  // Frozen from tests/oracles/reference_values.py.
  const auto led = compute_ledger(golden_link(), golden_security());
  EXPECT_LE(rel_diff(led.n, 24987.354660548067), 1e-12);
  EXPECT_LE(rel_diff(led.e_T, 274.37354660548067), 1e-12);
  EXPECT_LE(rel_diff(led.n1, 24925.06322669726), 1e-12);
  EXPECT_LE(rel_diff(led.e_T1, 273.7506322669726), 1e-12);
  EXPECT_LE(rel_diff(led.q, 2615.4355779536992), 1e-12);
  EXPECT_LE(rel_diff(led.t, 2824.9451931318281), 1e-12);
  EXPECT_LE(rel_diff(led.nu, 1517.7753070910281), 1e-12);
  EXPECT_LE(rel_diff(led.a, 8173.1274798294072), 1e-12);
  EXPECT_EQ(led.g_pa_bits, 30.0);
  EXPECT_LE(rel_diff(led.L, 9551.6975559366241), 1e-11);
  EXPECT_LE(rel_diff(led.S, 0.00095516975559366241), 1e-11);
  EXPECT_LE(rel_diff(led.R, 955169.75559366241), 1e-11);
  EXPECT_EQ(led.regime.label, RegimeLabel::direct);
  EXPECT_DOUBLE_EQ(led.regime.y, 0.05);
  EXPECT_TRUE(led.feasible);
  EXPECT_TRUE(led.warnings.empty());
}

TEST(ComputeLedger, OnlySiftingRemainsWithoutOverheads) {
  LinkParameters link;
  link.source = {1e-3, 1e-9};
  link.channel = {0.5, 0.0, Medium::fiber};
  link.detector = {0.8, 0.0};
  SecurityParameters sec;
  sec.m = 1e8;
  sec.epsilon = 1.0;
  sec.g_pa = 0;
  sec.authenticate = false;
  const auto led = compute_ledger(link, sec);
  EXPECT_EQ(led.q, 0.0);
  EXPECT_EQ(led.t, 0.0);
  EXPECT_EQ(led.a, 0.0);
  const double sifting_only = poisson_tail(0.8 * 1e-3 * 0.5, 1) / 2.0;
  EXPECT_NEAR(led.S, sifting_only - led.nu_tilde / 2.0, 1e-18);
  EXPECT_LT(led.nu_tilde / 2.0, 2e-3 * sifting_only);
}

TEST(ComputeLedger, LedgerIdentityAndDefinitions) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    LinkParameters link = golden_link();
    link.source.mu = 0.01 + 2.0 * u(rng);
    link.channel.alpha = 1e-3 + u(rng) * 0.999;
    link.channel.r_c = 0.1 * u(rng);
    link.detector.r_d = 1e-4 * u(rng);
    link.eve.cls = trial % 2 ? EveClass::technology_limited : EveClass::lossless_replacement;
    SecurityParameters sec = golden_security();
    sec.m = std::pow(10.0, 5.0 + 4.0 * u(rng));
    const auto led = compute_ledger(link, sec);
    const double rebuilt = led.n - (led.e_T + led.q + led.t + led.nu) - (led.a + led.g_pa_bits);
    const double scale = led.n + led.e_T + led.q + led.t + led.nu + led.a + led.g_pa_bits;
    EXPECT_LE(std::abs(rebuilt - led.L), 1e-9 * scale);
    EXPECT_EQ(led.S, led.L / sec.m);
    EXPECT_EQ(led.R, led.S / link.source.tau);
    EXPECT_EQ(led.nu_tilde, 2.0 * led.nu / sec.m);
    EXPECT_LE(led.e_T, led.n);
    EXPECT_LE(led.e_T1, led.n1);
    EXPECT_LE(led.n1, led.n);
    EXPECT_EQ(led.feasible, led.S > 0);
  }
}

TEST(ComputeLedger, SmallDarkCountApproximation) {
  LinkParameters link = golden_link();
  SecurityParameters sec = golden_security();
  for (double r_d : {1e-6, 3e-7, 1e-7, 1e-8, 0.0}) {
    link.detector.r_d = r_d;
    const auto led = compute_ledger(link, sec);
    EXPECT_LE(std::abs(led.S - led.S_approx), 10.0 * r_d + 1e-15) << r_d;
  }
}

TEST(ComputeLedger, ApproximationAtZeroErrors) {
  LinkParameters link = golden_link();
  link.channel.r_c = 0.0;
  link.detector.r_d = 0.0;
  const auto led = compute_ledger(link, golden_security());
  EXPECT_EQ(led.e_T, 0.0);
  EXPECT_TRUE(std::isinf(led.f));
  EXPECT_NEAR(led.S, led.S_approx, 1e-15);
}

TEST(ComputeLedger, CapacityDecreasesWithImpairments) {
  const LinkParameters base = golden_link();
  const SecurityParameters sec = golden_security();
  auto s_with = [&](auto&& edit) {
    LinkParameters link = base;
    SecurityParameters s = sec;
    edit(link, s);
    return compute_ledger(link, s).S;
  };
  double prev = 1.0;
  for (int i = 0; i <= 40; ++i) {
    const double v = s_with([&](auto& l, auto&) { l.channel.r_c = 0.002 * i; });
    EXPECT_LE(v, prev);
    prev = v;
  }
  prev = 1.0;
  for (int i = 0; i <= 40; ++i) {
    const double v = s_with([&](auto& l, auto&) { l.detector.r_d = 2.5e-6 * i; });
    EXPECT_LE(v, prev);
    prev = v;
  }
  prev = 1.0;
  for (int i = 0; i <= 40; ++i) {
    const double v = s_with([&](auto& l, auto&) { l.error_correction.x = 1.0 + 0.05 * i; });
    EXPECT_LE(v, prev);
    prev = v;
  }
  prev = 1.0;
  for (int i = 0; i <= 40; ++i) {
    const double v = s_with([&](auto&, auto& s) { s.g_pa = 5.0 * i; });
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(ComputeLedger, WarnsOnHighErrorRate) {
  LinkParameters link = golden_link();
  link.channel.r_c = 0.3;
  const auto led = compute_ledger(link, golden_security());
  ASSERT_EQ(led.warnings.size(), 1u);
  EXPECT_NE(led.warnings[0].find("0.25"), std::string::npos);
  EXPECT_FALSE(led.feasible);
}

TEST(ComputeLedger, RejectsInvalidParameters) {
  LinkParameters link = golden_link();
  link.channel.alpha = 0.0;
  try {
    compute_ledger(link, golden_security());
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "channel.alpha");
  }
  link = golden_link();
  link.channel.r_c = 0.6;
  EXPECT_THROW(compute_ledger(link, golden_security()), ValidationError);
  SecurityParameters sec = golden_security();
  sec.epsilon = 0.0;
  EXPECT_THROW(compute_ledger(golden_link(), sec), ValidationError);
  sec = golden_security();
  sec.m = 1.0;
  EXPECT_THROW(compute_ledger(golden_link(), sec), ValidationError);
}

TEST(AsymptoticCapacity, UpperBoundsFiniteBlocks) {
  const double s_inf = asymptotic_capacity(golden_link(), golden_security());
  SecurityParameters sec = golden_security();
  for (double m = 1e4; m <= 1e12; m *= 10) {
    sec.m = m;
    EXPECT_LT(compute_ledger(golden_link(), sec).S, s_inf);
  }
  sec.m = 1e15;
  EXPECT_LE(rel_diff(compute_ledger(golden_link(), sec).S, s_inf), 1e-4);
}

}  // namespace
}  // namespace qkdbudget
