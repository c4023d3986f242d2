// Copyright 2026 The ioncat Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv)
{
    using namespace ioncat::cli;
    CLI::App app{"ioncat: cat states of collective ion motion"};
    app.require_subcommand(1);
    Flags flags;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* cfg = sub->add_option("--config", flags.config, "JSON configuration file");
        if (needs_config) {
            cfg->required()->check(CLI::ExistingFile);
        }
        sub->add_option("--out", flags.out, "Output directory (stdout when omitted)");
        sub->add_option("--jobs", flags.jobs, "Worker threads")->check(CLI::Range(1, 256));
        sub->add_option("--seed", flags.seed, "Seed for the sampler or the validation draws");
        sub->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    };

    auto* simulate = app.add_subcommand("simulate", "Run a protocol or pulse sequence from a config");
    add_common(simulate, true);
    auto* validate = app.add_subcommand("validate", "Compare the engine against brute-force integration");
    add_common(validate, false);
    validate->add_flag("--quick", flags.quick, "Only N <= 2");
    validate->add_flag("--negative-control", flags.negative_control,
                       "Flip the oracle Rabi sign; every check must then fail");
    auto* sweep = app.add_subcommand("sweep", "Run a protocol over a parameter axis");
    add_common(sweep, true);
    auto* wig = app.add_subcommand("wigner", "Wigner grid of a saved motional state");
    add_common(wig, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    if (simulate->parsed()) {
        return cmd_simulate(flags, std::cout, std::cerr);
    }
    if (validate->parsed()) {
        return cmd_validate(flags, std::cout, std::cerr);
    }
    if (sweep->parsed()) {
        return cmd_sweep(flags, std::cout, std::cerr);
    }
    return cmd_wigner(flags, std::cout, std::cerr);
}
