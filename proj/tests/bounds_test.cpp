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

#include "jointlab/bounds.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

using namespace jointlab;

namespace {

const double kPi = std::numbers::pi;
const double kRoot2 = std::numbers::sqrt2;

DensityOperator4 test_pure_state(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    return DensityOperator4::from_ket({Complex{g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)}});
}

DensityOperator4 test_mixed_state(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Matrix4 m;
    for (std::size_t r = 0; r < 4; r++) {
        for (std::size_t c = 0; c < 4; c++) {
            m(r, c) = Complex{g(rng), g(rng)};
        }
    }
    Matrix4 p = m * m.adjoint();
    p *= 1 / trace(p).real();
    return DensityOperator4::from_matrix(p);
}

CorrelationVector random_correlations(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    return {u(rng), u(rng), u(rng), u(rng)};
}

}  // namespace

TEST(bounds, signed_visibilities) {
    const auto sv = signed_visibilities({0, 0}, {1, 1, 1, 1});
    ASSERT_EQ(sv.ax, 1);
    ASSERT_EQ(sv.ay, 0);
    ASSERT_EQ(sv.bx, -1);
    ASSERT_EQ(sv.by, 0);

    const auto q = signed_visibilities({kPi / 4, kPi / 4}, {1, 1, -1, -1});
    for (double v : {q.ax, q.ay, q.bx, q.by}) {
        ASSERT_NEAR(v, kRoot2 / 2, 1e-15);
    }

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> angle(-10, 10);
    for (int k = 0; k < 100; k++) {
        const AnglePair a{angle(rng), angle(rng)};
        for (auto o : PairOutcomeLabel::all()) {
            const auto s = signed_visibilities(a, o);
            ASSERT_NEAR(s.ax * s.ax + s.ay * s.ay, 1, 1e-15);
            ASSERT_NEAR(s.bx * s.bx + s.by * s.by, 1, 1e-15);
        }
        const auto sel = signed_visibilities(a, selected_outcome(a));
        ASSERT_GE(std::min({sel.ax, sel.ay, sel.bx, sel.by}), 0);
    }
}

TEST(bounds, outcome_bound_lhs_examples) {
    ASSERT_EQ(outcome_bound_lhs({}, signed_visibilities({0.3, 1.1}, {1, -1, 1, -1})), 0);

    const auto sv = signed_visibilities({0, 0}, {1, 1, -1, -1});
    ASSERT_EQ(sv.ax, 1);
    ASSERT_EQ(sv.bx, 1);
    ASSERT_EQ(outcome_bound_lhs({1, 0, 0, -1}, sv), 1);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> quarter(0, kPi / 2);
    std::uniform_real_distribution<double> full(0, 2 * kPi);
    for (int k = 0; k < 200; k++) {
        const AnglePair a{quarter(rng), quarter(rng)};
        const double phi = full(rng);
        const double lhs = outcome_bound_lhs(bell_family_correlations(phi), signed_visibilities(a, {1, 1, -1, -1}));
        ASSERT_NEAR(lhs, std::cos(a.alpha + a.beta - phi), 1e-14);
        const auto d = pair_distribution_trace(
            BellFamilyState(phi).to_density(), VisibilityPair::saturated(a.alpha), VisibilityPair::saturated(a.beta));
        ASSERT_NEAR((d[{1, 1, -1, -1}]), (1 - lhs) / 16, 1e-14);
    }
}

TEST(bounds, outcome_bound_is_probability_complement) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> quarter(0, kPi / 2);
    std::uniform_real_distribution<double> full(-2 * kPi, 2 * kPi);
    for (int k = 0; k < 1000; k++) {
        const auto c = random_correlations(rng);

        // First-quadrant angles: one identity per outcome.
        const AnglePair a{quarter(rng), quarter(rng)};
        const auto d = pair_distribution_formula(c, {std::cos(a.alpha), std::sin(a.alpha)}, {std::cos(a.beta), std::sin(a.beta)});
        for (auto o : PairOutcomeLabel::all()) {
            ASSERT_NEAR((1 - outcome_bound_lhs(c, signed_visibilities(a, o))) / 16, d[o], 1e-12);
        }

        // Arbitrary angles: the selected outcome carries the angle form.
        const AnglePair g{full(rng), full(rng)};
        const auto dg = pair_distribution_formula(c, VisibilityPair::saturated(g.alpha), VisibilityPair::saturated(g.beta));
        ASSERT_NEAR(dg[selected_outcome(g)], (1 - angle_inequality_lhs(c, g) / 2) / 16, 1e-12);
        ASSERT_NEAR(
            outcome_bound_lhs(c, signed_visibilities(g, {1, 1, -1, -1})), angle_inequality_lhs(c, g) / 2, 1e-12);
    }
}

TEST(bounds, angle_inequality_examples) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> full(0, 2 * kPi);
    for (int k = 0; k < 100; k++) {
        const double phi = full(rng);
        ASSERT_NEAR(angle_inequality_lhs(bell_family_correlations(phi), {phi / 2, phi / 2}), 2, 1e-14);
        ASSERT_EQ(angle_inequality_lhs({}, {full(rng), full(rng)}), 0);
    }
    const CorrelationVector beyond{1, 1, 1, -1};
    ASSERT_NEAR(angle_inequality_lhs(beyond, {kPi / 4, kPi / 4}), 2, 1e-15);
    ASSERT_NEAR(angle_inequality_lhs(beyond, {kPi / 4, 0}), 2 * kRoot2, 1e-15);
}

TEST(bounds, closed_form_bounds) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> full(0, 2 * kPi);
    for (int k = 0; k < 100; k++) {
        const auto c = bell_family_correlations(full(rng));
        ASSERT_NEAR(tight_bound_lhs(c), 2, 1e-14);
        ASSERT_NEAR(simplified_bound_lhs(c), 4, 1e-14);
    }
    ASSERT_EQ(tight_bound_lhs({}), 0);
    ASSERT_EQ(simplified_bound_lhs({}), 0);
    ASSERT_EQ(tight_bound_lhs({1, 0, 0, 1}), 2);
    ASSERT_EQ(simplified_bound_lhs({1, 0, 0, 1}), 0);

    ASSERT_NEAR(chsh_value(bell_family_correlations(kPi / 4)), 2 * kRoot2, 1e-15);
    ASSERT_NEAR(chsh_value(bell_family_correlations(0)), 2, 1e-15);
    ASSERT_NEAR(chsh_value(bell_family_correlations(kPi / 3)), 1 + std::sqrt(3.0), 1e-15);
}

TEST(bounds, coherence_examples) {
    for (double phi : {0.0, 0.4, 1.3, 2.9, 5.5}) {
        ASSERT_NEAR(coherence_bound_lhs(BellFamilyState(phi).to_density()), 0.5, 1e-15);
    }
    ASSERT_EQ(coherence_bound_lhs(DensityOperator4::maximally_mixed()), 0);
    const auto mixture = DensityOperator4::mixture<2>(
        {0.5, 0.5},
        {BellFamilyState(0).to_density(), DensityOperator4::from_ket(bell_basis_ket(BellBasis::psi_minus))});
    ASSERT_NEAR(coherence_bound_lhs(mixture), 0.5, 1e-15);
    ASSERT_NEAR(std::abs(mixture.matrix()(0, 3)), 0.25, 1e-15);
    ASSERT_NEAR(std::abs(mixture.matrix()(2, 1)), 0.25, 1e-15);
}

TEST(bounds, sup_over_angles_examples) {
    for (double phi : {0.0, 0.7, 2.0, 4.4}) {
        ASSERT_NEAR(sup_over_angles(bell_family_correlations(phi)).value, 2, 1e-9);
    }
    ASSERT_EQ(sup_over_angles({}).value, 0);
    ASSERT_THROW(sup_over_angles({}, 7), std::invalid_argument);
    const auto opt = sup_over_angles({0.2, -0.4, 0.9, 0.1}, 8);
    ASSERT_NEAR(opt.value, angle_inequality_lhs({0.2, -0.4, 0.9, 0.1}, opt.angles), 1e-15);
}

TEST(bounds, sup_over_angles_matches_closed_form) {
    std::mt19937_64 rng(6);
    for (int k = 0; k < 1000; k++) {
        const auto c = random_correlations(rng);
        ASSERT_NEAR(sup_over_angles(c).value, tight_bound_lhs(c), 1e-9);
    }
    // Degenerate radii.
    for (CorrelationVector c : {CorrelationVector{1, 0, 0, 1}, CorrelationVector{1, 0, 0, -1},
                                CorrelationVector{1e-4, 0.3, 0.3, -1e-4}, CorrelationVector{0, 1e-6, 0, 0}}) {
        ASSERT_NEAR(sup_over_angles(c).value, tight_bound_lhs(c), 1e-9);
    }
}

TEST(bounds, sup_over_angles_brute_force_oracle) {
    const CorrelationVector c{0.37, -0.81, 0.12, 0.55};
    const double step = 0.001;
    const auto n = static_cast<int>(2 * kPi / step) + 1;
    double brute = -INFINITY;
    for (int i = 0; i < n; i++) {
        for (int j = 0; j < n; j++) {
            brute = std::max(brute, angle_inequality_lhs(c, {i * step, j * step}));
        }
    }
    const double sup = sup_over_angles(c).value;
    ASSERT_LE(brute, sup + 1e-12);
    ASSERT_NEAR(brute, sup, 1e-5);
}

TEST(bounds, implication_chain_on_quantum_states) {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 100000; k++) {
        const auto rho = (k % 2 == 0) ? test_pure_state(rng) : test_mixed_state(rng);
        const auto c = correlations_of_state(rho);
        const double tight = tight_bound_lhs(c);
        ASSERT_LE(tight, 2 + 1e-9);
        ASSERT_LE(simplified_bound_lhs(c), 4 + 1e-9);
        ASSERT_LE(chsh_value(c), 2 * kRoot2 + 1e-9);
        ASSERT_LE(coherence_bound_lhs(rho), 0.5 + 1e-12);
    }
}

TEST(bounds, implication_chain_each_step) {
    // tight <= 2 implies simplified <= 4 implies chsh <= 2 sqrt 2, also for non-quantum vectors.
    std::mt19937_64 rng(8);
    for (int k = 0; k < 100000; k++) {
        const auto c = random_correlations(rng);
        if (tight_bound_lhs(c) <= 2) {
            ASSERT_LE(simplified_bound_lhs(c), 4 + 1e-12);
        }
        if (simplified_bound_lhs(c) <= 4) {
            ASSERT_LE(chsh_value(c), 2 * kRoot2 + 1e-12);
        }
    }
}

TEST(bounds, coherence_is_quarter_of_tight_bound) {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 1000; k++) {
        const auto rho = (k % 2 == 0) ? test_pure_state(rng) : test_mixed_state(rng);
        ASSERT_NEAR(4 * coherence_bound_lhs(rho), tight_bound_lhs(correlations_of_state(rho)), 1e-10);
    }
}

TEST(bounds, bound_report) {
    const auto r = make_bound_report(BellFamilyState(kPi / 4).to_density());
    ASSERT_NEAR(r.tight_lhs, 4 * r.coherence_lhs, 1e-10);
    ASSERT_NEAR(r.sup_angles, r.tight_lhs, 1e-9);
    ASSERT_TRUE(r.tight_saturated);
    ASSERT_TRUE(r.simplified_saturated);
    ASSERT_TRUE(r.chsh_saturated);
    ASSERT_TRUE(r.coherence_saturated);

    const auto r3 = make_bound_report(BellFamilyState(kPi / 3).to_density());
    ASSERT_TRUE(r3.tight_saturated);
    ASSERT_FALSE(r3.chsh_saturated);

    const auto mixed = make_bound_report(DensityOperator4::maximally_mixed());
    ASSERT_FALSE(mixed.tight_saturated);
    ASSERT_EQ(mixed.tight_lhs, 0);
}
