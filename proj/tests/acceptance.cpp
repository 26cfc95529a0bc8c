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

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "jointlab/suites.hpp"

using namespace jointlab;

namespace {

template <typename F>
CriterionResult timed(F &&f, double limit_seconds) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r = f();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_seconds > 0) {
        r.checks.push_back(Check::at_most("runtime_seconds", seconds, limit_seconds, 0));
    }
    return r;
}

}  // namespace

int main(int argc, char **argv) {
    std::uint64_t seed = 20260101;
    for (int i = 1; i < argc; i++) {
        if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
            seed = std::strtoull(argv[++i], nullptr, 10);
        } else {
            std::fprintf(stderr, "usage: %s [--seed N]\n", argv[0]);
            return 2;
        }
    }

    const CriterionResult results[] = {
        timed(criterion_povm_admissibility, 1.0),
        timed([&] { return criterion_single_moments(seed); }, 0),
        timed(criterion_bloch_bound, 0),
        timed([&] { return criterion_pair_statistics(seed); }, 0),
        timed([&] { return criterion_tight_bound(seed); }, 30.0),
        timed([&] { return criterion_sup_identity(seed); }, 0),
        timed([&] { return criterion_cirelson(seed); }, 0),
        timed([&] { return criterion_coherence(seed); }, 0),
        timed(criterion_experimental_optima, 0),
        timed([&] { return criterion_monte_carlo(seed); }, 0),
    };

    int failures = 0;
    for (const auto &r : results) {
        std::printf("[%s] criterion %d: %s\n", r.pass() ? "PASS" : "FAIL", r.id, r.title.c_str());
        for (const auto &c : r.checks) {
            std::printf("        %-40s %-24s %s %-24s tol %-8s %s\n", c.name.c_str(), format_double(c.value).c_str(),
                        c.relation.c_str(), format_double(c.bound).c_str(), format_double(c.tolerance).c_str(),
                        c.pass ? "ok" : "FAILED");
        }
        failures += !r.pass();
    }
    std::printf("%d/%zu criteria passed (seed %llu)\n", static_cast<int>(std::size(results)) - failures,
                std::size(results), static_cast<unsigned long long>(seed));
    return failures == 0 ? 0 : 1;
}
