// Copyright 2026 The jointlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "jointlab/sampling.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

using namespace jointlab;

namespace {

const double kPi = std::numbers::pi;
const double kRoot2Inv = 1 / std::numbers::sqrt2;

}  // namespace

TEST(sampling, haar_random_pure_state) {
    SeededSampler s(5);
    for (int k = 0; k < 100; k++) {
        const auto rho = haar_random_pure_state(s);
        ASSERT_NEAR(trace(rho.matrix()).real(), 1, 1e-12);
        ASSERT_TRUE(is_positive_semidefinite(rho.matrix(), 1e-10));
        ASSERT_NEAR(rho.purity(), 1, 1e-12);
    }
    SeededSampler a(42);
    SeededSampler b(42);
    ASSERT_EQ(haar_random_pure_state(a).matrix(), haar_random_pure_state(b).matrix());
}

TEST(sampling, haar_ensemble_has_zero_mean_correlations) {
    const SeededSampler root(6);
    const std::size_t n = 100000;
    const auto xx = parallel_map(n, [&](std::size_t i) {
        SeededSampler s = root.fork(i);
        return correlations_of_state(haar_random_pure_state(s)).xx;
    });
    double mean = 0;
    for (double v : xx) {
        mean += v;
    }
    mean /= n;
    double var = 0;
    for (double v : xx) {
        var += (v - mean) * (v - mean);
    }
    const double se = std::sqrt(var / (n - 1) / n);
    ASSERT_LT(std::abs(mean), 3 * se);
}

TEST(sampling, ginibre_random_mixed_state) {
    SeededSampler s(7);
    for (int k = 0; k < 1000; k++) {
        const auto rho = ginibre_random_mixed_state(s);
        ASSERT_TRUE(rho.matrix().is_hermitian(1e-12));
        ASSERT_TRUE(rho.matrix().is_unit_trace(1e-12));
        ASSERT_TRUE(is_positive_semidefinite(rho.matrix(), 1e-10));
        ASSERT_GT(rho.purity(), 0.25 + 1e-9);
        ASSERT_LT(rho.purity(), 1 - 1e-9);
        ASSERT_LE(tight_bound_lhs(correlations_of_state(rho)), 2);
    }
}

TEST(sampling, random_bell_mixture_has_zero_local_means) {
    SeededSampler s(8);
    for (int k = 0; k < 1000; k++) {
        const auto m = local_means_of_state(random_bell_mixture(s));
        ASSERT_LT(std::max({std::abs(m.ax), std::abs(m.ay), std::abs(m.bx), std::abs(m.by)}), 1e-15);
        ASSERT_TRUE(random_admissible_visibility(s).is_admissible());
    }
}

TEST(sampling, parallel_map_is_worker_independent) {
    const SeededSampler root(9);
    auto draw = [&](std::size_t i) {
        SeededSampler s = root.fork(i);
        return s.uniform();
    };
    const auto one = parallel_map(5000, draw, 1);
    const auto many = parallel_map(5000, draw, 4);
    ASSERT_EQ(one, many);
    ASSERT_THROW(parallel_map(
                     1000,
                     [](std::size_t i) -> int {
                         if (i == 777) {
                             throw std::runtime_error("boom");
                         }
                         return 0;
                     },
                     4),
                 std::runtime_error);
}

TEST(sampling, sample_outcomes_uniform) {
    const PairOutcomeDistribution uniform(
        [] {
            std::array<double, 16> p{};
            p.fill(1.0 / 16);
            return p;
        }(),
        false);
    SeededSampler s(10);
    const std::size_t n = 16000;
    const auto r = sample_outcomes(uniform, n, s, "uniform");
    ASSERT_EQ(r.n(), n);
    ASSERT_EQ(r.seed, 10u);
    ASSERT_EQ(r.algorithm_id, "philox4x32-10/v1");
    std::array<int, 16> counts{};
    for (const auto &o : r.outcomes) {
        counts[o.index()]++;
    }
    const double sigma = std::sqrt(n * (1.0 / 16) * (15.0 / 16));
    for (int c : counts) {
        ASSERT_LT(std::abs(c - 1000.0), 5 * sigma);
    }
}

TEST(sampling, sample_outcomes_deterministic_and_errors) {
    std::array<double, 16> p{};
    p[9] = 1;
    SeededSampler s(11);
    const auto r = sample_outcomes(PairOutcomeDistribution(p, false), 500, s);
    for (const auto &o : r.outcomes) {
        ASSERT_EQ(o, PairOutcomeLabel::from_index(9));
    }

    const auto negative = pair_distribution_formula({1, 1, 1, -1}, {kRoot2Inv, kRoot2Inv}, {1, 0});
    ASSERT_THROW(sample_outcomes(negative, 10, s), std::invalid_argument);
    ASSERT_THROW(sample_outcomes(PairOutcomeDistribution(std::array<double, 16>{}, false), 10, s), std::invalid_argument);
}

TEST(sampling, perfectly_correlated_x_outcomes) {
    const auto d = pair_distribution_trace(BellFamilyState(0).to_density(), {1, 0}, {1, 0});
    SeededSampler s(12);
    const auto r = sample_outcomes(d, 100000, s);
    for (const auto &o : r.outcomes) {
        ASSERT_EQ(o.xa(), o.xb());
    }
}

TEST(sampling, estimate_moment_examples) {
    const auto d = pair_distribution_trace(BellFamilyState(0).to_density(), {kRoot2Inv, kRoot2Inv}, {kRoot2Inv, kRoot2Inv});
    SeededSampler s(13);
    const auto r = sample_outcomes(d, 100000, s);

    const auto norm = estimate_moment(r, {OutcomeFactor::one, OutcomeFactor::one});
    ASSERT_EQ(norm.value, 1);
    ASSERT_EQ(norm.std_error, 0);
    ASSERT_EQ(norm.n, 100000u);

    const auto xy = estimate_moment(r, {OutcomeFactor::xy, OutcomeFactor::one});
    ASSERT_LT(std::abs(xy.value), 4 * xy.std_error);

    const auto xx = estimate_moment(r, {OutcomeFactor::x, OutcomeFactor::x});
    ASSERT_LT(std::abs(xx.value - 0.5), 4 * xx.std_error);

    const auto generic = estimate_observable(r, [](PairOutcomeLabel o) {
        return o.xa() * o.xb();
    });
    ASSERT_NEAR(generic.value, xx.value, 1e-12);
    ASSERT_NEAR(generic.std_error, xx.std_error, 1e-12);

    ShotRecord single;
    single.outcomes.push_back(PairOutcomeLabel(1, 1, 1, 1));
    ASSERT_THROW(estimate_moment(single, {}), std::invalid_argument);
}

TEST(sampling, standard_error_scales_as_inverse_root_n) {
    const auto d = pair_distribution_trace(BellFamilyState(0.3).to_density(), {0.6, 0.8}, {0.8, 0.6});
    double previous = 0;
    for (std::size_t n = 10000; n <= 160000; n *= 2) {
        SeededSampler s(14);
        const auto e = estimate_moment(sample_outcomes(d, n, s), {OutcomeFactor::x, OutcomeFactor::y});
        if (previous > 0) {
            ASSERT_NEAR(e.std_error / previous, 1 / std::numbers::sqrt2, 0.02);
        }
        previous = e.std_error;
    }
}

TEST(sampling, estimator_consistency_over_repeated_runs) {
    const auto rho = BellFamilyState(1.1).to_density();
    const VisibilityPair va(0.8, 0.6);
    const VisibilityPair vb(0.28, 0.96);
    const auto d = pair_distribution_trace(rho, va, vb);
    const MomentSpec specs[] = {
        {OutcomeFactor::x, OutcomeFactor::x},
        {OutcomeFactor::y, OutcomeFactor::y},
        {OutcomeFactor::x, OutcomeFactor::y},
        {OutcomeFactor::xy, OutcomeFactor::x},
    };
    const SeededSampler root(15);
    for (const auto &spec : specs) {
        const double population = pair_moment(d, spec);
        int inside = 0;
        for (std::uint64_t run = 0; run < 1000; run++) {
            SeededSampler s = root.fork(run);
            const auto e = estimate_moment(sample_outcomes(d, 1000, s), spec);
            inside += std::abs(e.value - population) < 5 * e.std_error;
        }
        ASSERT_GE(inside, 990) << spec.name();
    }
}

TEST(sampling, experimental_chsh) {
    ASSERT_NEAR(experimental_chsh(kPi / 4, {kPi / 4, kPi / 4}), std::numbers::sqrt2, 1e-15);
    ASSERT_EQ(experimental_chsh(0, {0, 0}), 1);

    // Population value from the trace path.
    for (double phi : {0.0, 0.5, kPi / 4, 2.0}) {
        for (AnglePair a : {AnglePair{0.1, 1.2}, AnglePair{kPi / 4, kPi / 4}, AnglePair{1.5, 0.3}}) {
            const auto d = pair_distribution_trace(
                BellFamilyState(phi).to_density(), VisibilityPair::saturated(a.alpha), VisibilityPair::saturated(a.beta));
            const double population = pair_moment(d, {OutcomeFactor::x, OutcomeFactor::x}) +
                                      pair_moment(d, {OutcomeFactor::y, OutcomeFactor::x}) +
                                      pair_moment(d, {OutcomeFactor::x, OutcomeFactor::y}) -
                                      pair_moment(d, {OutcomeFactor::y, OutcomeFactor::y});
            ASSERT_NEAR(experimental_chsh(phi, a), population, 1e-12);
        }
    }
}

TEST(sampling, experimental_chsh_monte_carlo) {
    const double phi = kPi / 4;
    const AnglePair a{0.6, 0.9};
    const auto d = pair_distribution_trace(
        BellFamilyState(phi).to_density(), VisibilityPair::saturated(a.alpha), VisibilityPair::saturated(a.beta));
    SeededSampler s(16);
    const auto e = estimate_observable(sample_outcomes(d, 1000000, s), chsh_shot_value);
    ASSERT_LT(std::abs(e.value - experimental_chsh(phi, a)), 4 * e.std_error);
}

TEST(sampling, max_experimental_chsh) {
    const auto q = max_experimental_chsh(kPi / 4);
    ASSERT_NEAR(q.value, std::numbers::sqrt2, 1e-6);
    ASSERT_NEAR(q.alpha, kPi / 4, 1e-6);
    ASSERT_NEAR(q.beta, kPi / 4, 1e-6);

    const auto z = max_experimental_chsh(0);
    ASSERT_NEAR(z.value, 1, 1e-9);
    ASSERT_NEAR(z.alpha, z.beta, 1e-6);

    const auto h = max_experimental_chsh(kPi / 2);
    ASSERT_NEAR(h.value, 1, 1e-9);
    ASSERT_NEAR(h.alpha + h.beta, kPi / 2, 1e-6);

    // Brute-force oracle on a fine grid for an off-axis phase.
    const double phi = 2.4;
    double brute = -INFINITY;
    for (int i = 0; i <= 1000; i++) {
        for (int j = 0; j <= 1000; j++) {
            brute = std::max(brute, experimental_chsh(phi, {i * kPi / 2000, j * kPi / 2000}));
        }
    }
    const auto m = max_experimental_chsh(phi);
    ASSERT_GE(m.value, brute - 1e-12);
    ASSERT_NEAR(m.value, brute, 1e-5);
    ASSERT_THROW(max_experimental_chsh(0, 4), std::invalid_argument);
}

TEST(sampling, experimental_chsh_of_state) {
    for (double phi : {0.0, 0.4, kPi / 4, 1.3}) {
        for (AnglePair a : {AnglePair{0.2, 1.1}, AnglePair{kPi / 4, kPi / 4}}) {
            ASSERT_NEAR(experimental_chsh_of(bell_family_correlations(phi), a), experimental_chsh(phi, a), 1e-15);
        }
    }
    // Correlation moments factor into visibilities for every state, so the closed form matches the trace path.
    SeededSampler s(18);
    for (int k = 0; k < 200; k++) {
        const auto rho = ginibre_random_mixed_state(s);
        const AnglePair a{s.uniform() * kPi / 2, s.uniform() * kPi / 2};
        const auto d = pair_distribution_trace(rho, VisibilityPair::saturated(a.alpha), VisibilityPair::saturated(a.beta));
        const double population = pair_moment(d, {OutcomeFactor::x, OutcomeFactor::x}) +
                                  pair_moment(d, {OutcomeFactor::y, OutcomeFactor::x}) +
                                  pair_moment(d, {OutcomeFactor::x, OutcomeFactor::y}) -
                                  pair_moment(d, {OutcomeFactor::y, OutcomeFactor::y});
        ASSERT_NEAR(experimental_chsh_of(correlations_of_state(rho), a), population, 1e-12);
    }
}

TEST(sampling, max_experimental_chsh_of_state) {
    const auto bell = max_experimental_chsh_of(bell_family_correlations(kPi / 4));
    ASSERT_NEAR(bell.value, std::numbers::sqrt2, 1e-12);
    ASSERT_NEAR(bell.alpha, kPi / 4, 1e-6);
    ASSERT_NEAR(bell.beta, kPi / 4, 1e-6);
    for (double phi : {0.3, 1.0, 2.0, 2.9, 4.0, 5.5}) {
        ASSERT_NEAR(max_experimental_chsh_of(bell_family_correlations(phi)).value, max_experimental_chsh(phi).value, 1e-9)
            << phi;
    }

    // Brute-force oracle for an arbitrary correlation vector.
    const CorrelationVector c{0.3, -0.6, 0.8, 0.45};
    double brute = -INFINITY;
    for (int i = 0; i <= 1000; i++) {
        for (int j = 0; j <= 1000; j++) {
            brute = std::max(brute, experimental_chsh_of(c, {i * kPi / 2000, j * kPi / 2000}));
        }
    }
    const auto m = max_experimental_chsh_of(c);
    ASSERT_GE(m.value, brute - 1e-12);
    ASSERT_NEAR(m.value, brute, 1e-5);
    ASSERT_THROW(max_experimental_chsh_of(c, 4), std::invalid_argument);
}

TEST(sampling, experimental_chsh_never_exceeds_root_two) {
    // Over the Bell family phase.
    double family = -INFINITY;
    for (int k = 0; k < 400; k++) {
        family = std::max(family, max_experimental_chsh(2 * kPi * k / 400, 64).value);
    }
    ASSERT_LE(family, std::numbers::sqrt2 + 1e-9);
    ASSERT_NEAR(family, std::numbers::sqrt2, 1e-9);

    // Over random pure and mixed states.
    const SeededSampler root(19);
    const auto best = parallel_map(20000, [&](std::size_t i) {
        SeededSampler s = root.fork(i);
        const auto rho = i % 2 ? ginibre_random_mixed_state(s) : haar_random_pure_state(s);
        return max_experimental_chsh_of(correlations_of_state(rho), 16).value;
    });
    ASSERT_LE(*std::max_element(best.begin(), best.end()), std::numbers::sqrt2 + 1e-9);
}

TEST(sampling, zero_probability_chsh) {
    const auto third = zero_probability_chsh(kPi / 3);
    ASSERT_NEAR(third.value, 1.25, 1e-15);
    ASSERT_NEAR(third.probability, 0, 1e-12);
    ASSERT_EQ(third.outcome, PairOutcomeLabel(1, 1, -1, -1));
    ASSERT_NEAR(zero_probability_chsh(0).value, 1, 1e-15);
    ASSERT_NEAR(zero_probability_chsh(kPi / 2).value, 1, 1e-15);
    for (int k = 0; k < 100; k++) {
        const double phi = -7 + 0.14 * k;
        const auto z = zero_probability_chsh(phi);
        ASSERT_NEAR(z.probability, 0, 1e-12) << phi;
        ASSERT_NEAR(z.value, zero_probability_curve(phi), 1e-14);
    }
}

TEST(sampling, zero_probability_curve_maximum) {
    const auto m = zero_probability_curve_max(1e-4);
    ASSERT_NEAR(m.value, 1.25, 1e-6);
    ASSERT_NEAR(std::cos(m.phi), 0.5, 1e-6);
    ASSERT_NEAR(chsh_value(bell_family_correlations(m.phi)), 1 + std::sqrt(3.0), 1e-9);
    ASSERT_THROW(zero_probability_curve_max(0), std::invalid_argument);
}

TEST(sampling, constrained_maximizer_is_half_phase) {
    for (int k = 0; k <= 20; k++) {
        const double phi = kPi / 2 * k / 20;
        const auto grid = constrained_experimental_max(phi, 1e-4);
        ASSERT_NEAR(grid.value, zero_probability_chsh(phi).value, 1e-6) << phi;
        ASSERT_NEAR(grid.alpha + grid.beta, phi, 1e-12);
    }
    ASSERT_THROW(constrained_experimental_max(4.0), std::invalid_argument);
}

TEST(sampling, half_phase_is_not_optimal_past_quarter_turn) {
    // With cos(phi) < 0 the constrained optimum moves to the edge of the angle square.
    for (double phi : {1.8, 2.2, 2.6, 3.0}) {
        const auto grid = constrained_experimental_max(phi, 1e-4);
        ASSERT_NEAR(grid.value, -std::cos(2 * phi), 1e-6) << phi;
        ASSERT_GT(grid.value, zero_probability_chsh(phi).value);
        ASSERT_LT(grid.value, zero_probability_curve_max().value);
    }
}

TEST(sampling, zero_probability_outcome_never_sampled) {
    for (int k = 0; k < 50; k++) {
        const double phi = 0.05 + (kPi - 0.1) * k / 49;
        const auto z = zero_probability_chsh(phi);
        ASSERT_NEAR((1 - std::cos(z.angles.alpha + z.angles.beta - phi)) / 16, 0, 1e-12);
        const auto d = pair_distribution_trace(
            BellFamilyState(phi).to_density(), VisibilityPair::saturated(z.angles.alpha),
            VisibilityPair::saturated(z.angles.beta));
        SeededSampler s(1000 + k);
        const auto r = sample_outcomes(d, 1000000, s);
        for (const auto &o : r.outcomes) {
            ASSERT_NE(o, z.outcome) << phi;
        }
    }
}

TEST(sampling, bound_violation_search) {
    const SeededSampler s(17);
    const auto r = bound_violation_search(100000, s);
    ASSERT_LE(r.max_tight_lhs, 2 + 1e-9);
    ASSERT_LE(r.max_chsh, 2 * std::numbers::sqrt2 + 1e-9);
    ASSERT_GT(r.max_tight_lhs, 1.9);

    const auto one_a = bound_violation_search(1, SeededSampler(3));
    const auto one_b = bound_violation_search(1, SeededSampler(3));
    ASSERT_EQ(one_a.argmax_state_digest, one_b.argmax_state_digest);
    ASSERT_EQ(one_a.argmax_state_digest.size(), 16u);

    const auto serial = bound_violation_search(3000, SeededSampler(4), 1);
    const auto threaded = bound_violation_search(3000, SeededSampler(4), 3);
    ASSERT_EQ(serial.max_tight_lhs, threaded.max_tight_lhs);
    ASSERT_EQ(serial.argmax_state_digest, threaded.argmax_state_digest);
    ASSERT_THROW(bound_violation_search(0, s), std::invalid_argument);
}
