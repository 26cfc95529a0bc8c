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

#include <cstdio>
#include <numbers>

#include "jointlab/jointlab.hpp"

using namespace jointlab;

int main() {
    // A joint measurement of X and Y on one qubit with equal visibilities.
    const VisibilityPair v(1 / std::numbers::sqrt2, 1 / std::numbers::sqrt2);
    const BlochEquatorial s(0.6, 0.8);
    const auto d = outcome_distribution(v, s);
    std::printf("single qubit, state (0.6, 0.8):\n");
    for (auto o : OutcomeLabel::all()) {
        std::printf("  P(%+d, %+d) = %.6f\n", o.x(), o.y(), d[o]);
    }

    // Two such measurements on the Bell family state.
    const double phi = std::numbers::pi / 4;
    const auto rho = BellFamilyState(phi).to_density();
    const auto c = correlations_of_state(rho);
    std::printf("\nBell family state, phi = pi/4:\n");
    std::printf("  correlations   (%.6f, %.6f, %.6f, %.6f)\n", c.xx, c.xy, c.yx, c.yy);
    std::printf("  tight bound    %.12f (limit 2)\n", tight_bound_lhs(c));
    std::printf("  numerical sup  %.12f\n", sup_over_angles(c).value);
    std::printf("  CHSH           %.12f (limit %.12f)\n", chsh_value(c), kCirelsonBound);
    std::printf("  coherence      %.12f (limit 0.5)\n", coherence_bound_lhs(rho));

    const auto best = max_experimental_chsh(phi);
    std::printf("\nexperimental CHSH maximum %.9f at alpha = %.6f, beta = %.6f\n", best.value, best.alpha, best.beta);
    const auto curve = zero_probability_curve_max();
    std::printf("zero-probability curve maximum %.9f at cos(phi) = %.9f\n", curve.value, std::cos(curve.phi));

    // Sample shots and compare an estimate with its population value.
    const auto z = zero_probability_chsh(curve.phi);
    const auto dist = pair_distribution_trace(
        BellFamilyState(curve.phi).to_density(), VisibilityPair::saturated(z.angles.alpha),
        VisibilityPair::saturated(z.angles.beta));
    SeededSampler sampler(2026);
    const auto shots = sample_outcomes(dist, 100000, sampler, "demo");
    const auto e = estimate_observable(shots, chsh_shot_value);
    std::size_t hits = 0;
    for (const auto &o : shots.outcomes) {
        hits += o == z.outcome;
    }
    std::printf("sampled CHSH %.5f +- %.5f (population %.5f); outcome %s drawn %zu times\n", e.value, e.std_error,
                z.value, z.outcome.str().c_str(), hits);
    return 0;
}
