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

#include <cstdlib>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "jointlab/jointlab.hpp"

namespace {

using namespace jointlab;

struct Options {
    RunConfig config;
    std::size_t grid_steps = 0;
    std::vector<double> va;
    std::vector<double> vb;
};

void add_common(CLI::App *cmd, Options &o) {
    cmd->add_option("--seed", o.config.seed, "Master seed for every random draw")->capture_default_str();
    cmd->add_option("--tolerance", o.config.tolerance, "Tolerance for closed-form comparisons")
        ->capture_default_str();
    cmd->add_option(
           "--grid-tolerance", o.config.grid_tolerance, "Tolerance for grid maxima and argmax angles")
        ->capture_default_str();
    cmd->add_option("-o,--output", o.config.output_path, "Report path (default: stdout or $JOINTLAB_OUTPUT_DIR)");
    cmd->add_option("--format", o.config.format, "Report format")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, OutputFormat>{{"json", OutputFormat::json}, {"csv", OutputFormat::csv}}))
        ->default_str("json");
}

void add_state(CLI::App *cmd, Options &o) {
    cmd->add_option("--state", o.config.state, "Two-qubit state: bell, mixed, haar or file")
        ->transform(CLI::CheckedTransformer(std::map<std::string, StateKind>{
            {"bell", StateKind::bell},
            {"mixed", StateKind::mixed},
            {"haar", StateKind::haar},
            {"file", StateKind::file}}))
        ->default_str("bell");
    cmd->add_option("--state-file", o.config.state_file, "JSON 4x4 matrix as rows of [re, im] pairs");
    cmd->add_option("--phi", o.config.phi, "Bell family phase in radians")->capture_default_str();
}

void add_visibilities(CLI::App *cmd, Options &o) {
    cmd->add_option("--alpha", o.config.alpha, "Visibility angle of A in radians: (|cos|, |sin|)")
        ->capture_default_str();
    cmd->add_option("--beta", o.config.beta, "Visibility angle of B in radians")->capture_default_str();
    cmd->add_option("--va", o.va, "Visibilities of A as VX VY (overrides --alpha)")->expected(2);
    cmd->add_option("--vb", o.vb, "Visibilities of B as VX VY (overrides --beta)")->expected(2);
}

std::string default_output(const RunConfig &c) {
    const char *dir = std::getenv("JOINTLAB_OUTPUT_DIR");
    if (!c.output_path.empty() || dir == nullptr || *dir == '\0') {
        return c.output_path;
    }
    return std::string(dir) + "/" + subcommand_name(c.subcommand) + (c.format == OutputFormat::json ? ".json" : ".csv");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Joint measurement and Bell bound verification lab"};
    app.set_version_flag("--version", kArtifactVersion);
    app.require_subcommand(1);
    Options o;

    auto *single = app.add_subcommand("single", "Single-qubit joint measurement checks");
    single->add_option("--vx", o.config.vx, "X visibility")->capture_default_str();
    single->add_option("--vy", o.config.vy, "Y visibility")->capture_default_str();
    single->add_option("--ex", o.config.ex, "<X> of the qubit state")->capture_default_str();
    single->add_option("--ey", o.config.ey, "<Y> of the qubit state")->capture_default_str();

    auto *pair = app.add_subcommand("pair", "Two-qubit outcome statistics");
    add_state(pair, o);
    add_visibilities(pair, o);

    auto *bound = app.add_subcommand("bound", "Correlation bounds of a state");
    add_state(bound, o);
    bound->add_option("--grid-steps", o.grid_steps, "Coarse grid of the angle supremum");

    auto *scan = app.add_subcommand("scan", "Experimental CHSH surface or zero-probability curve");
    scan->add_option("--what", o.config.what, "eq20 (surface maximum over angles) or eq21 (constrained curve)")
        ->required()
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, ScanKind>{{"eq20", ScanKind::surface}, {"eq21", ScanKind::curve}}));
    scan->add_option("--phi", o.config.phi, "Bell family phase in radians")->capture_default_str();
    scan->add_option("--grid-steps", o.grid_steps, "Rows of the scan table");

    auto *sample = app.add_subcommand("sample", "Monte Carlo shots and estimators");
    add_state(sample, o);
    add_visibilities(sample, o);
    sample->add_option("--shots", o.config.shots, "Number of shots")->capture_default_str();
    sample->add_option("--shots-output", o.config.shots_output, "CSV file for the shot record");

    auto *verify = app.add_subcommand("verify", "Every acceptance criterion");

    const std::map<CLI::App *, Subcommand> kinds{
        {single, Subcommand::single}, {pair, Subcommand::pair},     {bound, Subcommand::bound},
        {scan, Subcommand::scan},     {sample, Subcommand::sample}, {verify, Subcommand::verify}};
    for (const auto &[cmd, kind] : kinds) {
        add_common(cmd, o);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto &[cmd, kind] : kinds) {
            if (cmd->parsed()) {
                o.config.subcommand = kind;
                auto *steps = cmd->get_option_no_throw("--grid-steps");
                if (steps != nullptr && steps->count() > 0) {
                    o.config.grid_steps = o.grid_steps;
                }
            }
        }
        if (o.va.size() == 2) {
            o.config.va = std::array<double, 2>{o.va[0], o.va[1]};
        }
        if (o.vb.size() == 2) {
            o.config.vb = std::array<double, 2>{o.vb[0], o.vb[1]};
        }
        o.config.output_path = default_output(o.config);

        ShotRecord shots;
        Report report = run(o.config, &shots);
        report.timestamp = utc_timestamp();

        const std::string text = render_report(report, o.config.format);
        if (o.config.output_path.empty()) {
            std::cout << text;
        } else {
            write_text(o.config.output_path, text);
        }
        if (!o.config.shots_output.empty()) {
            write_text(o.config.shots_output, shots_to_csv(shots));
        }

        std::size_t passed = 0;
        for (const auto &c : report.checks) {
            passed += c.pass;
            if (!c.pass) {
                std::cerr << "FAIL " << c.name << ": " << format_double(c.value) << " " << c.relation << " "
                          << format_double(c.bound) << " (tolerance " << format_double(c.tolerance) << ")\n";
            }
        }
        std::cerr << "jointlab " << subcommand_name(o.config.subcommand) << ": " << passed << "/"
                  << report.checks.size() << " checks passed\n";
        return report.all_pass() ? 0 : 1;
    } catch (const std::exception &e) {
        std::cerr << "jointlab: error: " << e.what() << "\n";
        return 2;
    }
}
