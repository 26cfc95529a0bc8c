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

#pragma once

#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "jointlab/bounds.hpp"
#include "jointlab/joint_measurement.hpp"
#include "jointlab/pair_statistics.hpp"
#include "jointlab/report.hpp"
#include "jointlab/sampling.hpp"

namespace jointlab {

/// One acceptance criterion evaluated at its pinned tolerances.
struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<Check> checks;

    bool pass() const {
        for (const auto &c : checks) {
            if (!c.pass) {
                return false;
            }
        }
        return !checks.empty();
    }
};

namespace internal {

inline double max_abs(double a, double b) {
    return std::max(a, std::abs(b));
}

/// Qubit state with a uniformly distributed Bloch vector inside the unit ball.
inline Matrix2 random_qubit_state(SeededSampler &s, double &ex, double &ey) {
    double n[3];
    double norm = 0;
    do {
        norm = 0;
        for (double &v : n) {
            v = s.normal();
            norm += v * v;
        }
    } while (norm == 0);
    const double r = std::cbrt(s.uniform()) / std::sqrt(norm);
    ex = n[0] * r;
    ey = n[1] * r;
    const double ez = n[2] * r;
    return 0.5 * (pauli(Pauli::I) + ex * pauli(Pauli::X) + ey * pauli(Pauli::Y) + ez * pauli(Pauli::Z));
}

inline const std::array<MomentSpec, 5> &mixed_xy_moments() {
    static const std::array<MomentSpec, 5> specs{
        MomentSpec{OutcomeFactor::xy, OutcomeFactor::x},
        MomentSpec{OutcomeFactor::xy, OutcomeFactor::y},
        MomentSpec{OutcomeFactor::x, OutcomeFactor::xy},
        MomentSpec{OutcomeFactor::y, OutcomeFactor::xy},
        MomentSpec{OutcomeFactor::xy, OutcomeFactor::xy},
    };
    return specs;
}

/// Largest deviation of the four visibility-weighted correlation moments from their factorized form.
inline double correlation_factor_error(
    const PairOutcomeDistribution &d, const CorrelationVector &c, const VisibilityPair &va, const VisibilityPair &vb) {
    double err = 0;
    err = max_abs(err, pair_moment(d, {OutcomeFactor::x, OutcomeFactor::x}) - va.vx() * vb.vx() * c.xx);
    err = max_abs(err, pair_moment(d, {OutcomeFactor::x, OutcomeFactor::y}) - va.vx() * vb.vy() * c.xy);
    err = max_abs(err, pair_moment(d, {OutcomeFactor::y, OutcomeFactor::x}) - va.vy() * vb.vx() * c.yx);
    err = max_abs(err, pair_moment(d, {OutcomeFactor::y, OutcomeFactor::y}) - va.vy() * vb.vy() * c.yy);
    return err;
}

inline double max_entry_difference(const PairOutcomeDistribution &a, const PairOutcomeDistribution &b) {
    double err = 0;
    for (std::size_t k = 0; k < 16; k++) {
        err = max_abs(err, a.probabilities()[k] - b.probabilities()[k]);
    }
    return err;
}

inline DensityOperator4 equal_bell_singlet_mixture() {
    return DensityOperator4::mixture<2>(
        {0.5, 0.5},
        {BellFamilyState(0).to_density(), DensityOperator4::from_ket(bell_basis_ket(BellBasis::psi_minus))});
}

/// Sampled moment versus population moment: |estimate - population| <= 5 standard errors.
inline std::vector<Check> moment_consistency_checks(
    const std::string &prefix, const PairOutcomeDistribution &d, const ShotRecord &r, Json *table = nullptr) {
    std::vector<Check> out;
    for (const auto &spec : MomentSpec::nontrivial()) {
        const double population = pair_moment(d, spec);
        const auto e = estimate_moment(r, spec);
        out.push_back(Check::at_most(prefix + spec.name(), std::abs(e.value - population), 5 * e.std_error, 1e-12));
        if (table) {
            table->push_back(
                {{"moment", spec.name()},
                 {"population", population},
                 {"estimate", e.value},
                 {"std_error", e.std_error},
                 {"n", e.n}});
        }
    }
    return out;
}

}  // namespace internal

inline CriterionResult criterion_povm_admissibility() {
    CriterionResult r{1, "POVM positivity matches visibility admissibility on a 101x101 grid", {}};
    int mismatches = 0;
    for (int i = 0; i <= 100; i++) {
        for (int j = 0; j <= 100; j++) {
            const double vx = i / 100.0;
            const double vy = j / 100.0;
            const VisibilityPair v(vx, vy);
            bool psd = true;
            for (auto o : OutcomeLabel::all()) {
                psd = psd && is_positive_semidefinite(povm_element(v, o), 1e-10);
            }
            mismatches += psd != v.is_admissible(1e-10);
        }
    }
    r.checks.push_back(Check::equals("grid_mismatches", mismatches, 0, 0));
    return r;
}

inline CriterionResult criterion_single_moments(std::uint64_t seed) {
    CriterionResult r{2, "single-qubit xy moment vanishes and means scale with visibility", {}};
    SeededSampler s = SeededSampler(seed).fork(2);
    double xy = 0;
    double prop = 0;
    for (int k = 0; k < 1000; k++) {
        const auto v = random_admissible_visibility(s);
        double ex = 0;
        double ey = 0;
        const Matrix2 rho = internal::random_qubit_state(s, ex, ey);
        const auto m = distribution_moments(outcome_distribution_of(rho, v));
        xy = internal::max_abs(xy, m.mean_xy);
        prop = internal::max_abs(prop, m.mean_x - v.vx() * ex);
        prop = internal::max_abs(prop, m.mean_y - v.vy() * ey);
    }
    r.checks.push_back(Check::at_most("max_abs_mean_xy", xy, 0, 1e-14));
    r.checks.push_back(Check::at_most("max_visibility_proportionality_error", prop, 0, 1e-12));
    return r;
}

inline CriterionResult criterion_bloch_bound() {
    CriterionResult r{3, "negative probabilities appear exactly outside the Bloch disc", {}};
    std::vector<VisibilityPair> family;
    for (int k = 0; 0.01 * k < std::numbers::pi / 2; k++) {
        family.push_back(VisibilityPair::saturated(0.01 * k));
    }
    family.push_back(VisibilityPair::saturated(std::numbers::pi / 2));

    int unphysical = 0;
    int undetected = 0;
    double physical_min = INFINITY;
    for (int i = 0; i <= 100; i++) {
        for (int j = 0; j <= 100; j++) {
            const BlochEquatorial s((i - 50) / 50.0, (j - 50) / 50.0);
            double lowest = INFINITY;
            for (const auto &v : family) {
                lowest = std::min(lowest, outcome_distribution(v, s).min());
            }
            if (bloch_bound_lhs(s) > 1) {
                unphysical++;
                undetected += !(lowest < -1e-9);
            } else {
                physical_min = std::min(physical_min, lowest);
            }
        }
    }
    r.checks.push_back(Check::at_least("unphysical_grid_states", unphysical, 1, 0));
    r.checks.push_back(Check::equals("unphysical_without_negative_probability", undetected, 0, 0));
    r.checks.push_back(Check::at_least("physical_min_probability", physical_min, 0, 1e-12));
    return r;
}

inline CriterionResult criterion_pair_statistics(std::uint64_t seed) {
    CriterionResult r{4, "pair moments vanish or factorize and the closed form matches the trace", {}};
    SeededSampler s = SeededSampler(seed).fork(4);
    double xy = 0;
    double factor = 0;
    double formula = 0;
    for (int k = 0; k < 1000; k++) {
        const auto rho = random_bell_mixture(s);
        const auto va = random_admissible_visibility(s);
        const auto vb = random_admissible_visibility(s);
        const auto c = correlations_of_state(rho);
        const auto d = pair_distribution_trace(rho, va, vb);
        for (const auto &spec : internal::mixed_xy_moments()) {
            xy = internal::max_abs(xy, pair_moment(d, spec));
        }
        factor = std::max(factor, internal::correlation_factor_error(d, c, va, vb));
        formula = std::max(formula, internal::max_entry_difference(pair_distribution_formula(c, va, vb), d));
    }
    r.checks.push_back(Check::at_most("max_abs_xy_moment", xy, 0, 1e-12));
    r.checks.push_back(Check::at_most("max_correlation_factor_error", factor, 0, 1e-12));
    r.checks.push_back(Check::at_most("max_formula_trace_difference", formula, 0, 1e-11));
    return r;
}

inline CriterionResult criterion_tight_bound(std::uint64_t seed, unsigned workers = 0) {
    CriterionResult r{5, "tight bound holds on random states and is saturated by the Bell family", {}};
    const SeededSampler root = SeededSampler(seed).fork(5);
    const auto pure = bound_violation_search(100000, root.fork(0), workers);
    const SeededSampler mixed_root = root.fork(1);
    const auto mixed = parallel_map(
        100000,
        [&](std::size_t i) {
            SeededSampler local = mixed_root.fork(i);
            return tight_bound_lhs(correlations_of_state(ginibre_random_mixed_state(local)));
        },
        workers);
    double saturation = 0;
    for (int k = 0; k < 100; k++) {
        const double phi = 2 * std::numbers::pi * k / 100;
        saturation = internal::max_abs(saturation, tight_bound_lhs(bell_family_correlations(phi)) - 2);
    }
    r.checks.push_back(Check::at_most("max_tight_lhs_pure", pure.max_tight_lhs, 2, 1e-9));
    r.checks.push_back(Check::at_most("max_tight_lhs_mixed", *std::max_element(mixed.begin(), mixed.end()), 2, 1e-9));
    r.checks.push_back(Check::at_most("bell_family_saturation_error", saturation, 0, 1e-12));
    return r;
}

inline CriterionResult criterion_sup_identity(std::uint64_t seed) {
    CriterionResult r{6, "numerical supremum over angles equals the closed-form bound", {}};
    SeededSampler s = SeededSampler(seed).fork(6);
    double err = 0;
    for (int k = 0; k < 1000; k++) {
        CorrelationVector c;
        for (double *p : {&c.xx, &c.xy, &c.yx, &c.yy}) {
            *p = 2 * s.uniform() - 1;
        }
        err = internal::max_abs(err, sup_over_angles(c).value - tight_bound_lhs(c));
    }
    r.checks.push_back(Check::at_most("max_sup_closed_form_difference", err, 0, 1e-9));
    return r;
}

inline CriterionResult criterion_cirelson(std::uint64_t seed, unsigned workers = 0) {
    CriterionResult r{7, "CHSH reaches 2 sqrt 2 on the Bell family and never exceeds it", {}};
    const auto search = bound_violation_search(100000, SeededSampler(seed).fork(7), workers);
    r.checks.push_back(
        Check::equals("bell_chsh", chsh_value(bell_family_correlations(std::numbers::pi / 4)), kCirelsonBound, 1e-12));
    r.checks.push_back(Check::at_most("max_random_chsh", search.max_chsh, kCirelsonBound, 1e-9));
    return r;
}

inline CriterionResult criterion_coherence(std::uint64_t seed) {
    CriterionResult r{8, "coherence form of the tight bound", {}};
    SeededSampler s = SeededSampler(seed).fork(8);
    double identity = 0;
    for (int k = 0; k < 1000; k++) {
        const auto rho = k % 2 ? ginibre_random_mixed_state(s) : haar_random_pure_state(s);
        identity = internal::max_abs(identity, 4 * coherence_bound_lhs(rho) - tight_bound_lhs(correlations_of_state(rho)));
    }
    double family = 0;
    for (int k = 0; k < 100; k++) {
        const double phi = 2 * std::numbers::pi * k / 100;
        family = internal::max_abs(family, coherence_bound_lhs(BellFamilyState(phi).to_density()) - kCoherenceBound);
    }
    r.checks.push_back(Check::at_most("max_identity_error", identity, 0, 1e-10));
    r.checks.push_back(Check::at_most("bell_family_coherence_error", family, 0, 1e-12));
    r.checks.push_back(
        Check::equals("bell_singlet_mixture_coherence", coherence_bound_lhs(internal::equal_bell_singlet_mixture()),
                      kCoherenceBound, 1e-12));
    return r;
}

inline CriterionResult criterion_experimental_optima() {
    CriterionResult r{9, "experimental CHSH optimum and zero-probability optimum", {}};
    const double pi = std::numbers::pi;
    const auto surface = max_experimental_chsh(pi / 4);
    r.checks.push_back(Check::equals("surface_max_value", surface.value, std::numbers::sqrt2, 1e-6));
    r.checks.push_back(Check::equals("surface_argmax_alpha", surface.alpha, pi / 4, 1e-6));
    r.checks.push_back(Check::equals("surface_argmax_beta", surface.beta, pi / 4, 1e-6));

    double grid_max = -INFINITY;
    for (int k = 0; 1e-4 * k <= pi; k++) {
        grid_max = std::max(grid_max, zero_probability_curve(1e-4 * k));
    }
    const auto curve = zero_probability_curve_max(1e-4);
    r.checks.push_back(Check::equals("curve_grid_max_value", grid_max, 1.25, 1e-6));
    r.checks.push_back(Check::equals("curve_max_value", curve.value, 1.25, 1e-6));
    r.checks.push_back(Check::equals("curve_argmax_cos", std::cos(curve.phi), 0.5, 1e-6));
    r.checks.push_back(Check::equals(
        "chsh_at_curve_argmax", chsh_value(bell_family_correlations(curve.phi)), 1 + std::sqrt(3.0), 1e-9));

    double probability = 0;
    double half_phase = 0;
    for (int k = 0; k < 50; k++) {
        const double phi = 0.05 + (pi - 0.1) * k / 49;
        const auto z = zero_probability_chsh(phi);
        const auto d = pair_distribution_trace(
            BellFamilyState(phi).to_density(), VisibilityPair::saturated(z.angles.alpha),
            VisibilityPair::saturated(z.angles.beta));
        probability = internal::max_abs(probability, (1 - std::cos(z.angles.alpha + z.angles.beta - phi)) / 16);
        probability = internal::max_abs(probability, z.probability);
        probability = internal::max_abs(probability, d[z.outcome]);
    }
    for (int k = 0; k <= 20; k++) {
        const double phi = pi / 2 * k / 20;
        half_phase =
            internal::max_abs(half_phase, constrained_experimental_max(phi, 1e-4).value - zero_probability_chsh(phi).value);
    }
    r.checks.push_back(Check::at_most("max_constrained_outcome_probability", probability, 0, 1e-12));
    r.checks.push_back(Check::at_most("half_phase_maximizer_error", half_phase, 0, 1e-6));
    return r;
}

inline CriterionResult criterion_monte_carlo(std::uint64_t seed) {
    CriterionResult r{10, "Monte Carlo estimates, zero-probability outcome and archive determinism", {}};
    const std::size_t n = 1000000;
    const SeededSampler root = SeededSampler(seed).fork(10);
    const double phi = std::numbers::pi / 3;
    const AnglePair angles{phi / 2, phi / 2};
    const auto bell = pair_distribution_trace(
        BellFamilyState(phi).to_density(), VisibilityPair::saturated(angles.alpha), VisibilityPair::saturated(angles.beta));

    SeededSampler bell_sampler = root.fork(0);
    const auto bell_shots = sample_outcomes(bell, n, bell_sampler, "bell");
    r.checks = internal::moment_consistency_checks("bell:", bell, bell_shots);

    SeededSampler mixed_sampler = root.fork(1);
    const auto rho = ginibre_random_mixed_state(mixed_sampler);
    const auto va = random_admissible_visibility(mixed_sampler);
    const auto vb = random_admissible_visibility(mixed_sampler);
    const auto mixed = pair_distribution_trace(rho, va, vb);
    const auto mixed_shots = sample_outcomes(mixed, n, mixed_sampler, "mixed");
    const auto mixed_checks = internal::moment_consistency_checks("mixed:", mixed, mixed_shots);
    r.checks.insert(r.checks.end(), mixed_checks.begin(), mixed_checks.end());

    const PairOutcomeLabel forbidden = selected_outcome(angles);
    std::size_t hits = 0;
    for (const auto &o : bell_shots.outcomes) {
        hits += o == forbidden;
    }
    r.checks.push_back(Check::equals("zero_probability_outcome_count", static_cast<double>(hits), 0, 0));

    SeededSampler again = root.fork(0);
    const bool identical = shots_to_csv(sample_outcomes(bell, n, again, "bell")) == shots_to_csv(bell_shots);
    r.checks.push_back(Check::equals("identical_seed_identical_archive", identical ? 1 : 0, 1, 0));
    return r;
}

/// All acceptance criteria in order.
inline std::vector<CriterionResult> run_all_criteria(std::uint64_t seed, unsigned workers = 0) {
    std::vector<CriterionResult> out;
    out.push_back(criterion_povm_admissibility());
    out.push_back(criterion_single_moments(seed));
    out.push_back(criterion_bloch_bound());
    out.push_back(criterion_pair_statistics(seed));
    out.push_back(criterion_tight_bound(seed, workers));
    out.push_back(criterion_sup_identity(seed));
    out.push_back(criterion_cirelson(seed, workers));
    out.push_back(criterion_coherence(seed));
    out.push_back(criterion_experimental_optima());
    out.push_back(criterion_monte_carlo(seed));
    return out;
}

inline void add_criterion(Report &report, const CriterionResult &c) {
    report.add(c.checks, "criterion" + std::to_string(c.id) + ".");
    report.results["criteria"].push_back({{"id", c.id}, {"title", c.title}, {"pass", c.pass()}});
}

/// Reads a 4x4 complex matrix stored as four rows of [re, im] pairs.
inline DensityOperator4 load_state_file(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw std::runtime_error("cannot read state file '" + path + "'");
    }
    Json j;
    try {
        j = Json::parse(f);
    } catch (const Json::exception &e) {
        throw std::runtime_error("state file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_array() || j.size() != 4) {
        throw std::runtime_error("state file '" + path + "' must hold 4 rows");
    }
    Matrix4 m;
    for (std::size_t r = 0; r < 4; r++) {
        if (!j[r].is_array() || j[r].size() != 4) {
            throw std::runtime_error("state file '" + path + "' row " + std::to_string(r) + " must hold 4 entries");
        }
        for (std::size_t c = 0; c < 4; c++) {
            const auto &e = j[r][c];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                throw std::runtime_error("state file '" + path + "' entries must be [re, im] pairs");
            }
            m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return DensityOperator4::from_matrix(m);
}

inline DensityOperator4 resolve_state(const RunConfig &c) {
    switch (c.state) {
        case StateKind::bell:
            return BellFamilyState(c.phi).to_density();
        case StateKind::mixed: {
            SeededSampler s(c.seed);
            return ginibre_random_mixed_state(s);
        }
        case StateKind::haar: {
            SeededSampler s(c.seed);
            return haar_random_pure_state(s);
        }
        case StateKind::file:
            return load_state_file(c.state_file);
    }
    throw std::logic_error("unknown state kind");
}

inline std::pair<VisibilityPair, VisibilityPair> resolve_visibilities(const RunConfig &c) {
    const VisibilityPair va = c.va ? VisibilityPair((*c.va)[0], (*c.va)[1]) : VisibilityPair::saturated(c.alpha);
    const VisibilityPair vb = c.vb ? VisibilityPair((*c.vb)[0], (*c.vb)[1]) : VisibilityPair::saturated(c.beta);
    return {va, vb};
}

namespace internal {

inline Json matrix_to_json(const Matrix4 &m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < 4; r++) {
        Json row = Json::array();
        for (std::size_t c = 0; c < 4; c++) {
            row.push_back({m(r, c).real(), m(r, c).imag()});
        }
        rows.push_back(row);
    }
    return rows;
}

inline Json correlations_to_json(const CorrelationVector &c) {
    return {{"xx", c.xx}, {"xy", c.xy}, {"yx", c.yx}, {"yy", c.yy}};
}

inline Json state_to_json(const RunConfig &c, const DensityOperator4 &rho) {
    return {{"kind", state_kind_name(c.state)}, {"digest", state_digest(rho.matrix())}, {"matrix", matrix_to_json(rho.matrix())}};
}

}  // namespace internal

inline Report run_single(const RunConfig &c) {
    Report rep;
    const VisibilityPair v(c.vx, c.vy);
    const BlochEquatorial s(c.ex, c.ey);
    const auto d = outcome_distribution(v, s);
    const auto m = distribution_moments(d);
    Json probs = Json::array();
    for (auto o : OutcomeLabel::all()) {
        probs.push_back({{"x", o.x()}, {"y", o.y()}, {"probability", d[o]}});
    }
    rep.results["distribution"] = probs;
    rep.results["hypothetical"] = d.hypothetical();
    rep.results["moments"] = {{"x", m.mean_x}, {"y", m.mean_y}, {"xy", m.mean_xy}};
    rep.results["visibility_admissible"] = v.is_admissible();
    rep.results["state_physical"] = s.is_physical();
    rep.results["positivity_lhs"] = state_positivity_lhs(v, s);
    rep.results["bloch_lhs"] = bloch_bound_lhs(s);

    const auto trace_path = outcome_distribution_of(s.density(), v);
    double diff = 0;
    for (auto o : OutcomeLabel::all()) {
        diff = internal::max_abs(diff, d[o] - trace_path[o]);
    }
    rep.add(Check::equals("probability_sum", d.sum(), 1, c.tolerance));
    rep.add(Check::at_most("formula_trace_difference", diff, 0, c.tolerance));
    rep.add(Check::equals("mean_xy", m.mean_xy, 0, c.tolerance));
    rep.add(Check::equals("mean_x", m.mean_x, c.vx * c.ex, c.tolerance));
    rep.add(Check::equals("mean_y", m.mean_y, c.vy * c.ey, c.tolerance));
    const bool nonnegative = d.min() >= -c.tolerance;
    const bool predicted = state_positivity_lhs(v, s) <= 1 + c.tolerance;
    rep.add(Check::equals("positivity_matches_lhs", nonnegative == predicted ? 1 : 0, 1, 0));

    for (const auto &crit : {criterion_povm_admissibility(), criterion_single_moments(c.seed), criterion_bloch_bound()}) {
        add_criterion(rep, crit);
    }
    return rep;
}

inline Report run_pair(const RunConfig &c) {
    Report rep;
    const auto rho = resolve_state(c);
    const auto [va, vb] = resolve_visibilities(c);
    const auto corr = correlations_of_state(rho);
    const auto means = local_means_of_state(rho);
    const auto d = pair_distribution_trace(rho, va, vb);
    const bool zero_mean = std::max({std::abs(means.ax), std::abs(means.ay), std::abs(means.bx), std::abs(means.by)}) <=
                           c.tolerance;
    const auto formula = pair_distribution_formula(corr, va, vb);

    rep.results["state"] = internal::state_to_json(c, rho);
    rep.results["visibilities"] = {{"a", {va.vx(), va.vy()}}, {"b", {vb.vx(), vb.vy()}}};
    rep.results["correlations"] = internal::correlations_to_json(corr);
    rep.results["local_means"] = {{"ax", means.ax}, {"ay", means.ay}, {"bx", means.bx}, {"by", means.by}};
    rep.results["zero_local_means"] = zero_mean;
    rep.results["hypothetical"] = d.hypothetical();
    Json table = Json::array();
    for (auto o : PairOutcomeLabel::all()) {
        table.push_back({{"outcome", o.str()}, {"trace", d[o]}, {"formula", formula[o]}});
    }
    rep.results["distribution"] = table;
    Json moments = Json::object();
    for (const auto &spec : MomentSpec::nontrivial()) {
        moments[spec.name()] = pair_moment(d, spec);
    }
    rep.results["moments"] = moments;

    rep.add(Check::equals("probability_sum", d.sum(), 1, c.tolerance));
    for (const auto &spec : internal::mixed_xy_moments()) {
        rep.add(Check::equals("moment " + spec.name(), pair_moment(d, spec), 0, c.tolerance));
    }
    rep.add(Check::at_most("correlation_factor_error", internal::correlation_factor_error(d, corr, va, vb), 0, c.tolerance));
    if (zero_mean) {
        rep.add(Check::at_most("formula_trace_difference", internal::max_entry_difference(formula, d), 0, c.tolerance));
    }
    double marginal = 0;
    const auto ma = outcome_distribution_of(reduced_state_a(rho), va);
    const auto mb = outcome_distribution_of(reduced_state_b(rho), vb);
    for (auto o : OutcomeLabel::all()) {
        marginal = internal::max_abs(marginal, d.marginal_a()[o] - ma[o]);
        marginal = internal::max_abs(marginal, d.marginal_b()[o] - mb[o]);
    }
    rep.add(Check::at_most("marginal_error", marginal, 0, c.tolerance));

    add_criterion(rep, criterion_pair_statistics(c.seed));
    return rep;
}

inline Report run_bound(const RunConfig &c) {
    Report rep;
    const auto rho = resolve_state(c);
    const std::size_t steps = c.grid_steps.value_or(kDefaultCoarseSteps);
    const auto b = make_bound_report(rho, steps);
    rep.results["state"] = internal::state_to_json(c, rho);
    rep.results["correlations"] = internal::correlations_to_json(b.correlations);
    rep.results["tight_lhs"] = b.tight_lhs;
    rep.results["simplified_lhs"] = b.simplified_lhs;
    rep.results["chsh"] = b.chsh;
    rep.results["coherence_lhs"] = b.coherence_lhs;
    rep.results["sup_over_angles"] = b.sup_angles;
    const auto experimental = max_experimental_chsh_of(b.correlations);
    rep.results["experimental_chsh_max"] = {
        {"value", experimental.value}, {"alpha", experimental.alpha}, {"beta", experimental.beta}};
    rep.results["saturated"] = {
        {"tight", b.tight_saturated},
        {"simplified", b.simplified_saturated},
        {"chsh", b.chsh_saturated},
        {"coherence", b.coherence_saturated}};

    rep.add(Check::at_most("tight_lhs", b.tight_lhs, kTightBound, c.tolerance));
    rep.add(Check::at_most("simplified_lhs", b.simplified_lhs, kSimplifiedBound, c.tolerance));
    rep.add(Check::at_most("chsh", b.chsh, kCirelsonBound, c.tolerance));
    rep.add(Check::at_most("coherence_lhs", b.coherence_lhs, kCoherenceBound, c.tolerance));
    rep.add(Check::equals("coherence_identity", 4 * b.coherence_lhs, b.tight_lhs, c.tolerance));
    rep.add(Check::equals("sup_over_angles", b.sup_angles, b.tight_lhs, c.tolerance));
    rep.add(Check::at_most("experimental_chsh_max", experimental.value, std::numbers::sqrt2, c.tolerance));
    if (c.state == StateKind::bell) {
        rep.add(Check::equals("bell_tight_saturation", b.tight_lhs, kTightBound, c.tolerance));
        rep.add(Check::equals("bell_chsh", b.chsh, 2 * (std::cos(c.phi) + std::sin(c.phi)), c.tolerance));
    }

    for (const auto &crit : {criterion_tight_bound(c.seed), criterion_sup_identity(c.seed), criterion_cirelson(c.seed),
                             criterion_coherence(c.seed)}) {
        add_criterion(rep, crit);
    }
    return rep;
}

inline Report run_scan(const RunConfig &c) {
    Report rep;
    const double pi = std::numbers::pi;
    if (c.what == ScanKind::curve) {
        const std::size_t n = c.grid_steps.value_or(10001);
        const double step = pi / static_cast<double>(n - 1);
        Json table = Json::array();
        double grid_value = -INFINITY;
        double grid_phi = 0;
        for (std::size_t k = 0; k < n; k++) {
            const double phi = step * static_cast<double>(k);
            const double v = zero_probability_curve(phi);
            table.push_back({{"phi", phi}, {"cos_phi", std::cos(phi)}, {"value", v}});
            if (v > grid_value) {
                grid_value = v;
                grid_phi = phi;
            }
        }
        const auto refined = zero_probability_curve_max(step);
        const double chsh = chsh_value(bell_family_correlations(refined.phi));
        rep.results["grid_max"] = {{"phi", grid_phi}, {"cos_phi", std::cos(grid_phi)}, {"value", grid_value}};
        rep.results["max"] = {{"phi", refined.phi}, {"cos_phi", std::cos(refined.phi)}, {"value", refined.value}, {"chsh", chsh}};
        rep.results["table"] = table;

        rep.add(Check::equals("max_value", refined.value, 1.25, c.tolerance));
        rep.add(Check::equals("argmax_cos_phi", std::cos(refined.phi), 0.5, c.tolerance));
        rep.add(Check::equals("chsh_at_argmax", chsh, 1 + std::sqrt(3.0), c.tolerance));
        rep.add(Check::equals("grid_max_value", grid_value, 1.25, c.grid_tolerance));
        rep.add(Check::at_most("grid_below_max", grid_value, refined.value, c.tolerance));
        return rep;
    }

    const std::size_t n = c.grid_steps.value_or(65);
    const auto best = max_experimental_chsh(c.phi);
    const auto zero = zero_probability_chsh(c.phi);
    rep.results["phi"] = c.phi;
    rep.results["max"] = {{"value", best.value}, {"alpha", best.alpha}, {"beta", best.beta}};
    rep.results["zero_probability"] = {
        {"value", zero.value}, {"alpha", zero.angles.alpha}, {"beta", zero.angles.beta},
        {"outcome", zero.outcome.str()}, {"probability", zero.probability}};
    Json table = Json::array();
    for (std::size_t k = 0; k < n; k++) {
        const double phi = pi * static_cast<double>(k) / static_cast<double>(n - 1);
        const auto m = max_experimental_chsh(phi);
        table.push_back(
            {{"phi", phi}, {"max_value", m.value}, {"alpha", m.alpha}, {"beta", m.beta},
             {"zero_probability_value", zero_probability_curve(phi)}});
    }
    rep.results["table"] = table;

    const double cs = std::cos(c.phi);
    const double sn = std::sin(c.phi);
    rep.add(Check::at_most("max_below_trivial_bound", best.value, std::abs(cs) + std::abs(sn), c.tolerance));
    rep.add(Check::at_most("zero_probability_below_max", zero.value, best.value, c.tolerance));
    rep.add(Check::equals("zero_probability_outcome", zero.probability, 0, c.tolerance));
    if (cs >= 0 && sn >= 0) {
        rep.add(Check::equals("max_value", best.value, cs + sn, c.tolerance));
        if (cs > 0 && sn > 0) {
            rep.add(Check::equals("argmax_alpha", best.alpha, pi / 4, c.grid_tolerance));
            rep.add(Check::equals("argmax_beta", best.beta, pi / 4, c.grid_tolerance));
        }
    }
    return rep;
}

inline Report run_sample(const RunConfig &c, ShotRecord *shots_out = nullptr) {
    Report rep;
    const auto rho = resolve_state(c);
    const auto [va, vb] = resolve_visibilities(c);
    const auto d = pair_distribution_trace(rho, va, vb);
    SeededSampler s = SeededSampler(c.seed).fork(1);
    char source[160];
    std::snprintf(source, sizeof(source), "state=%s digest=%s va=(%.17g,%.17g) vb=(%.17g,%.17g)", state_kind_name(c.state),
                  state_digest(rho.matrix()).c_str(), va.vx(), va.vy(), vb.vx(), vb.vy());
    const auto shots = sample_outcomes(d, c.shots, s, source);

    rep.results["record"] = {
        {"source", shots.source},
        {"n", shots.n()},
        {"seed", shots.seed},
        {"stream", shots.stream},
        {"algorithm_id", shots.algorithm_id}};
    Json moments = Json::array();
    rep.add(internal::moment_consistency_checks("moment ", d, shots, &moments));
    rep.results["moments"] = moments;

    const auto chsh = estimate_observable(shots, chsh_shot_value);
    const double chsh_population = pair_moment(d, {OutcomeFactor::x, OutcomeFactor::x}) +
                                   pair_moment(d, {OutcomeFactor::y, OutcomeFactor::x}) +
                                   pair_moment(d, {OutcomeFactor::x, OutcomeFactor::y}) -
                                   pair_moment(d, {OutcomeFactor::y, OutcomeFactor::y});
    rep.results["chsh"] = {{"population", chsh_population}, {"estimate", chsh.value}, {"std_error", chsh.std_error}};
    rep.add(Check::at_most("chsh", std::abs(chsh.value - chsh_population), 5 * chsh.std_error, 1e-12));

    std::array<std::size_t, 16> counts{};
    for (const auto &o : shots.outcomes) {
        counts[o.index()]++;
    }
    Json freq = Json::array();
    for (auto o : PairOutcomeLabel::all()) {
        freq.push_back({{"outcome", o.str()}, {"probability", d[o]}, {"count", counts[o.index()]}});
        if (std::abs(d[o]) <= c.tolerance) {
            rep.add(Check::equals("zero_probability_count " + o.str(), static_cast<double>(counts[o.index()]), 0, 0));
        }
    }
    rep.results["counts"] = freq;
    if (shots_out) {
        *shots_out = shots;
    }
    return rep;
}

inline Report run_verify(const RunConfig &c) {
    Report rep;
    for (const auto &crit : run_all_criteria(c.seed)) {
        add_criterion(rep, crit);
    }
    return rep;
}

/// Runs the suite named by `config.subcommand`. The returned report carries the config echo but no
/// timestamp. When `shots_out` is given, the sample suite stores its shot record there.
inline Report run(const RunConfig &config, ShotRecord *shots_out = nullptr) {
    config.validate();
    Report rep;
    switch (config.subcommand) {
        case Subcommand::single:
            rep = run_single(config);
            break;
        case Subcommand::pair:
            rep = run_pair(config);
            break;
        case Subcommand::bound:
            rep = run_bound(config);
            break;
        case Subcommand::scan:
            rep = run_scan(config);
            break;
        case Subcommand::sample:
            rep = run_sample(config, shots_out);
            break;
        case Subcommand::verify:
            rep = run_verify(config);
            break;
    }
    rep.config = config;
    return rep;
}

}  // namespace jointlab
