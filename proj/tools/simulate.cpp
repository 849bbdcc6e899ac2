// Copyright (C) 2026 The Sentinel Authors. All rights reserved.

// Licensed under the Apache License, Version 2.0 (the "License");
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "sentinel/errors.hpp"
#include "sentinel/scenario.hpp"

int main(int argc, char** argv) {
    using namespace sentinel;

    CLI::App app{"simulate: deterministic scenario replay"};
    app.require_subcommand(1);
    auto* run = app.add_subcommand("run", "Replay a scenario file and compare with its expectations");
    std::string path;
    Timestamp start = 1'700'000'000;
    std::string report_path;
    bool json = false;
    run->add_option("scenario-file", path, "Scenario document")->required();
    run->add_option("--start", start, "Virtual clock start, epoch seconds");
    run->add_option("--report", report_path, "Write the JSON report to this path");
    run->add_flag("--json", json, "Print the JSON report instead of the text summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    sim::Scenario scenario;
    try {
        scenario = sim::load_scenario(path);
    } catch (const Error& e) {
        std::cerr << "simulate: " << e.what() << '\n';
        return 2;
    }

    const auto began = std::chrono::steady_clock::now();
    const auto report = sim::run_scenario(scenario, start);
    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - began);
    const auto diff = sim::diff_expected(report, scenario);

    const auto document = sim::to_document(report).dump(2);
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) {
            std::cerr << "simulate: cannot write " << report_path << '\n';
            return 2;
        }
        out << document << '\n';
    }
    if (json) std::cout << document << '\n';
    else std::cout << sim::format_report(report);
    std::cerr << diff.text;
    std::cerr << (diff.exit_code == 0 ? "OK" : "MISMATCH") << " (" << elapsed.count() << " ms)\n";
    return diff.exit_code;
}
