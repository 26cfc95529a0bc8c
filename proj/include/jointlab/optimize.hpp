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

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

namespace jointlab {

struct ScalarOptimum {
    double x;
    double value;
};

/// Golden-section search for the maximum of a function unimodal on [lo, hi]. Returns the best point seen,
/// endpoints included, so a maximum sitting on the boundary of the bracket is found as well.
template <typename F>
ScalarOptimum golden_section_maximize(F &&f, double lo, double hi, int iterations) {
    if (hi < lo) {
        std::swap(lo, hi);
    }
    const double inv_phi = (std::sqrt(5.0) - 1) / 2;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int k = 0; k < iterations; k++) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    ScalarOptimum best{c, fc};
    if (fd > best.value) {
        best = {d, fd};
    }
    for (double x : {lo, hi}) {
        const double fx = f(x);
        if (fx > best.value) {
            best = {x, fx};
        }
    }
    return best;
}

/// Bisection for a sign change of f on [lo, hi]. Requires f(lo) and f(hi) of opposite sign (or zero).
template <typename F>
double bisect_root(F &&f, double lo, double hi, int iterations = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0) {
        return lo;
    }
    if (fhi == 0) {
        return hi;
    }
    if ((flo > 0) == (fhi > 0)) {
        throw std::invalid_argument("bisect_root: bracket does not contain a sign change");
    }
    for (int k = 0; k < iterations; k++) {
        const double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double fm = f(mid);
        if (fm == 0) {
            return mid;
        }
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return lo + (hi - lo) / 2;
}

}  // namespace jointlab
