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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "jointlab/sampling.hpp"
#include "json.hpp"

#ifndef JOINTLAB_VERSION
#define JOINTLAB_VERSION "1.0.0"
#endif

namespace jointlab {

using Json = nlohmann::ordered_json;

inline constexpr const char *kArtifactVersion = "jointlab/" JOINTLAB_VERSION;

enum class Subcommand { single, pair, bound, scan, sample, verify };
enum class OutputFormat { json, csv };
enum class StateKind { bell, mixed, haar, file };
enum class ScanKind { none, surface, curve };

inline const char *subcommand_name(Subcommand s) {
    switch (s) {
        case Subcommand::single:
            return "single";
        case Subcommand::pair:
            return "pair";
        case Subcommand::bound:
            return "bound";
        case Subcommand::scan:
            return "scan";
        case Subcommand::sample:
            return "sample";
        case Subcommand::verify:
            return "verify";
    }
    return "?";
}

inline const char *state_kind_name(StateKind k) {
    switch (k) {
        case StateKind::bell:
            return "bell";
        case StateKind::mixed:
            return "mixed";
        case StateKind::haar:
            return "haar";
        case StateKind::file:
            return "file";
    }
    return "?";
}

inline const char *scan_kind_name(ScanKind k) {
    switch (k) {
        case ScanKind::none:
            return "none";
        case ScanKind::surface:
            return "eq20";
        case ScanKind::curve:
            return "eq21";
    }
    return "?";
}

/// Everything a run depends on. Two runs with equal configs produce identical reports apart from the
/// timestamp.
struct RunConfig {
    Subcommand subcommand = Subcommand::verify;
    std::uint64_t seed = 20260101;
    /// Tolerance for closed-form and refined numerical comparisons.
    double tolerance = 1e-9;
    /// Tolerance for quantities limited by grid resolution (grid maxima and argmax angles).
    double grid_tolerance = 1e-6;
    std::optional<std::size_t> grid_steps;
    std::string output_path;
    OutputFormat format = OutputFormat::json;

    double phi = std::numbers::pi / 4;
    double alpha = std::numbers::pi / 4;
    double beta = std::numbers::pi / 4;
    std::optional<std::array<double, 2>> va;
    std::optional<std::array<double, 2>> vb;
    StateKind state = StateKind::bell;
    std::string state_file;
    ScanKind what = ScanKind::none;

    double vx = 1 / std::numbers::sqrt2;
    double vy = 1 / std::numbers::sqrt2;
    double ex = 0.6;
    double ey = 0.8;

    std::size_t shots = 100000;
    std::string shots_output;

    /// Throws std::invalid_argument describing the first violated constraint.
    void validate() const {
        auto fail = [](const std::string &msg) {
            throw std::invalid_argument(msg);
        };
        if (!(tolerance > 0) || !std::isfinite(tolerance)) {
            fail("--tolerance must be a positive finite number");
        }
        if (!(grid_tolerance > 0) || !std::isfinite(grid_tolerance)) {
            fail("--grid-tolerance must be a positive finite number");
        }
        if (grid_steps && *grid_steps < 8) {
            fail("--grid-steps must be at least 8");
        }
        for (double a : {phi, alpha, beta, vx, vy, ex, ey}) {
            if (!std::isfinite(a)) {
                fail("angles, visibilities and Bloch components must be finite");
            }
        }
        if (state == StateKind::file && state_file.empty()) {
            fail("--state file requires --state-file");
        }
        if (state != StateKind::file && !state_file.empty()) {
            fail("--state-file is only valid with --state file");
        }
        if (subcommand == Subcommand::scan && what == ScanKind::none) {
            fail("scan requires --what eq20 or --what eq21");
        }
        if (subcommand != Subcommand::scan && what != ScanKind::none) {
            fail("--what is only valid with scan");
        }
        if (subcommand == Subcommand::sample && shots < 2) {
            fail("--shots must be at least 2");
        }
        if (subcommand != Subcommand::sample && !shots_output.empty()) {
            fail("--shots-output is only valid with sample");
        }
    }
};

inline Json config_to_json(const RunConfig &c) {
    Json j;
    j["subcommand"] = subcommand_name(c.subcommand);
    j["seed"] = c.seed;
    j["tolerance"] = c.tolerance;
    j["grid_tolerance"] = c.grid_tolerance;
    j["grid_steps"] = c.grid_steps ? Json(*c.grid_steps) : Json(nullptr);
    j["format"] = c.format == OutputFormat::json ? "json" : "csv";
    j["phi"] = c.phi;
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["va"] = c.va ? Json(*c.va) : Json(nullptr);
    j["vb"] = c.vb ? Json(*c.vb) : Json(nullptr);
    j["state"] = state_kind_name(c.state);
    j["state_file"] = c.state_file;
    j["what"] = scan_kind_name(c.what);
    j["vx"] = c.vx;
    j["vy"] = c.vy;
    j["ex"] = c.ex;
    j["ey"] = c.ey;
    j["shots"] = c.shots;
    return j;
}

/// One numeric comparison. `relation` is "<=", "==" or ">=" and `pass` is its outcome at `tolerance`.
struct Check {
    std::string name;
    double value = 0;
    double bound = 0;
    double tolerance = 0;
    std::string relation;
    bool pass = false;

    static Check at_most(std::string name, double value, double bound, double tolerance) {
        return {std::move(name), value, bound, tolerance, "<=", value <= bound + tolerance};
    }
    static Check equals(std::string name, double value, double target, double tolerance) {
        return {std::move(name), value, target, tolerance, "==", std::abs(value - target) <= tolerance};
    }
    static Check at_least(std::string name, double value, double bound, double tolerance) {
        return {std::move(name), value, bound, tolerance, ">=", value >= bound - tolerance};
    }
};

struct Report {
    RunConfig config;
    Json results = Json::object();
    std::vector<Check> checks;
    std::string artifact_version = kArtifactVersion;
    std::string timestamp;

    bool all_pass() const {
        for (const auto &c : checks) {
            if (!c.pass) {
                return false;
            }
        }
        return true;
    }

    void add(Check c) {
        checks.push_back(std::move(c));
    }
    void add(const std::vector<Check> &cs, const std::string &prefix = {}) {
        for (auto c : cs) {
            c.name = prefix + c.name;
            checks.push_back(std::move(c));
        }
    }
};

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace internal {

inline void dump_json(const Json &j, std::string &out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ",\n";
                }
                first = false;
                out += inner + Json(it.key()).dump() + ": ";
                dump_json(it.value(), out, indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            bool scalars = true;
            for (const auto &e : j) {
                scalars = scalars && !e.is_structured();
            }
            out += scalars ? "[" : "[\n";
            bool first = true;
            for (const auto &e : j) {
                if (!first) {
                    out += scalars ? ", " : ",\n";
                }
                first = false;
                if (!scalars) {
                    out += inner;
                }
                dump_json(e, out, indent + 1);
            }
            out += scalars ? "]" : "\n" + pad + "]";
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            out += std::isfinite(v) ? format_double(v) : "null";
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace internal

/// JSON text with every double printed at 17 significant digits, so parsing it back is bit-exact.
/// Non-finite doubles become null.
inline std::string dump_json(const Json &j) {
    std::string out;
    internal::dump_json(j, out, 0);
    out += "\n";
    return out;
}

inline Json report_to_json(const Report &r) {
    Json j;
    j["artifact_version"] = r.artifact_version;
    j["timestamp"] = r.timestamp;
    j["config"] = config_to_json(r.config);
    j["results"] = r.results;
    Json checks = Json::array();
    Json flags = Json::object();
    for (const auto &c : r.checks) {
        checks.push_back(
            {{"name", c.name},
             {"value", c.value},
             {"bound", c.bound},
             {"tolerance", c.tolerance},
             {"relation", c.relation},
             {"pass", c.pass}});
        flags[c.name] = c.pass;
    }
    j["checks"] = checks;
    j["pass_flags"] = flags;
    j["all_pass"] = r.all_pass();
    return j;
}

inline std::string report_to_csv(const Report &r) {
    std::string out = "name,value,bound,tolerance,pass\n";
    for (const auto &c : r.checks) {
        out += c.name + "," + format_double(c.value) + "," + format_double(c.bound) + "," +
               format_double(c.tolerance) + "," + (c.pass ? "true" : "false") + "\n";
    }
    return out;
}

inline std::string shots_to_csv(const ShotRecord &r) {
    std::string out = "index,x_a,y_a,x_b,y_b\n";
    out.reserve(out.size() + r.n() * 20);
    char buf[64];
    for (std::size_t i = 0; i < r.n(); i++) {
        const auto &o = r.outcomes[i];
        std::snprintf(buf, sizeof(buf), "%zu,%d,%d,%d,%d\n", i, o.xa(), o.ya(), o.xb(), o.yb());
        out += buf;
    }
    return out;
}

/// Writes `content` to `path`; throws std::runtime_error naming the path on failure.
inline void write_text(const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    f << content;
    f.close();
    if (!f) {
        throw std::runtime_error("failed writing '" + path + "'");
    }
}

inline std::string render_report(const Report &r, OutputFormat format) {
    return format == OutputFormat::json ? dump_json(report_to_json(r)) : report_to_csv(r);
}

inline void write_report(const Report &r, const std::string &path, OutputFormat format) {
    write_text(path, render_report(r, format));
}

}  // namespace jointlab
