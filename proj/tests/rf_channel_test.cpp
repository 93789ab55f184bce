#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "fsotrade/rf_channel.hpp"
#include "fsotrade/rng.hpp"
#include "test_support.hpp"

namespace rf = fsotrade::rf;
using fsotrade::testing::baseline_link;

TEST(PathGain, FarFieldFormula) {
    const rf::RfLinkParams p;
    const double at_ref = std::pow(std::sqrt(p.gain_tx * p.gain_rx) * p.wavelength_m /
                                       (4 * std::numbers::pi * p.reference_distance_m),
                                   2);
    EXPECT_NEAR(rf::path_gain(p, 80.0), at_ref, 1e-15 * at_ref);
    EXPECT_NEAR(rf::path_gain(p, 600.0), at_ref * std::pow(80.0 / 600.0, 3.5), 1e-12 * at_ref);
    EXPECT_THROW(rf::path_gain(p, 79.0), std::domain_error);
}

TEST(DualHop, ReducedLinkFromHops) {
    const rf::RfLinkParams p;
    const auto h1 = rf::make_hop(p, 600.0, 0.7);
    const auto h2 = rf::make_hop(p, 700.0, 1.3);
    const auto link = rf::make_dual_hop(p, h1, h2, 20.0);
    EXPECT_NEAR(link.v_mhz, h1.gain * 0.7 * p.source_power_w / p.noise_psd_w_per_mhz, 1e-9 * link.v_mhz);
    EXPECT_NEAR(link.r, std::log2(1 + h2.gain * 1.3 * p.relay_power_w / (p.noise_psd_w_per_mhz * 20.0)), 1e-12);
    EXPECT_NEAR(link.capacity_ceiling(), link.v_mhz / std::numbers::ln2, 1e-9 * link.v_mhz);
}

TEST(DualHop, BandwidthInverse) {
    for (double v : {5.0, 120.0, 4000.0}) {
        for (double b : {0.01, 1.0, 17.0, 900.0}) {
            const double y = rf::first_hop_efficiency(v, b);
            EXPECT_NEAR(rf::first_hop_bandwidth_for(v, y), b, 1e-10 * b);
        }
    }
    EXPECT_THROW(rf::first_hop_efficiency(10.0, 0.0), std::domain_error);
}

TEST(DualHop, TimeShareEqualizesHops) {
    const auto link = baseline_link();
    for (double b : {0.1, 3.0, 20.0}) {
        const double q = rf::optimal_time_share(link.v_mhz, link.r, b);
        const auto [c1, c2] = rf::hop_capacities(link, b, q);
        EXPECT_NEAR(c1, c2, 1e-12 * c1);
        EXPECT_NEAR(c1, rf::relay_capacity(link, b), 1e-12 * c1);
    }
}

TEST(DualHop, CapacityIsBestTimeShare) {
    const auto link = baseline_link(600, 700, 0.4, 2.0);
    for (double b : {0.5, 8.0, 20.0}) {
        double best = 0.0;
        for (double q : fsotrade::testing::linspace(0.0, 1.0, 100001)) {
            const auto [c1, c2] = rf::hop_capacities(link, b, q);
            best = std::max(best, std::min(c1, c2));
        }
        const double c = rf::dual_hop_capacity(link, b);
        EXPECT_GE(c, best - 1e-9);
        EXPECT_NEAR(c, best, 1e-4 * c);
    }
}

TEST(DualHop, RelayCapacityDomain) {
    const auto link = baseline_link();
    EXPECT_THROW(rf::relay_capacity(link, 0.0), std::domain_error);
    EXPECT_THROW(rf::relay_capacity(link, 20.0001), std::domain_error);
    EXPECT_NO_THROW(rf::relay_capacity(link, 20.0));
    EXPECT_GT(rf::dual_hop_capacity(link, 200.0), rf::dual_hop_capacity(link, 20.0));
}

TEST(DualHop, DerivativeMatchesRichardsonDifferences) {
    for (const auto& link : {baseline_link(), baseline_link(300, 1100, 2.5, 0.2), baseline_link(1200, 150)}) {
        for (double b : {1e-3, 0.2, 2.0, 15.0, 300.0, 1e5}) {
            const auto c = [&](double x) { return rf::dual_hop_capacity(link, x); };
            const double h = 1e-3 * b;
            const double d1 = (c(b + h) - c(b - h)) / (2 * h);
            const double d2 = (c(b + h / 2) - c(b - h / 2)) / h;
            const double fd = (4 * d2 - d1) / 3;
            EXPECT_NEAR(rf::capacity_derivative(link, b), fd, 1e-6 * std::abs(fd)) << "b=" << b;
        }
    }
}

TEST(DualHop, DerivativeLimits) {
    const auto link = baseline_link();
    // y(b) grows only like log(1/b), so the approach to r is slow.
    EXPECT_LT(rf::capacity_derivative(link, 1e-250), link.r);
    EXPECT_NEAR(rf::capacity_derivative(link, 1e-250), link.r, 0.05 * link.r);
    EXPECT_LT(rf::capacity_derivative(link, 1e9), 1e-6);
    double prev = rf::capacity_derivative(link, 1e-6);
    for (double b = 1e-5; b < 1e6; b *= 3) {
        const double d = rf::capacity_derivative(link, b);
        EXPECT_GT(d, 0.0);
        EXPECT_LT(d, prev);
        prev = d;
    }
}

TEST(Fading, UnitIsDeterministic) {
    auto rng = fsotrade::derive_stream(1, {});
    EXPECT_EQ(rf::sample_fading({rf::FadingKind::DeterministicUnit}, rng), 1.0);
}

TEST(Fading, RayleighPowerIsUnitExponential) {
    auto rng = fsotrade::derive_stream(3, {4});
    std::vector<double> xs(20000);
    for (double& x : xs) x = rf::sample_fading({rf::FadingKind::Rayleigh}, rng);
    const auto cdf = [](double x) { return -std::expm1(-x); };
    EXPECT_LT(fsotrade::testing::ks_statistic(xs, cdf), 1.95 / std::sqrt(xs.size()));
}

TEST(Fading, NamesRoundTrip) {
    for (auto kind : {rf::FadingKind::DeterministicUnit, rf::FadingKind::Rayleigh}) {
        EXPECT_EQ(rf::parse_fading_kind(rf::to_string(kind)), kind);
    }
    EXPECT_THROW(rf::parse_fading_kind("rician"), std::invalid_argument);
}
