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

/**
 * @file commands.hpp
 * @brief The simulate / validate / sweep / wigner subcommands as plain functions.
 *
 * Exit codes: 0 success, 1 check failure or runtime error, 2 invalid input,
 * 3 Fock truncation too small.
 */

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ioncat/ioncat.hpp"

namespace ioncat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitTruncation = 3;

struct Flags {
    std::string config;
    std::optional<std::string> out;
    int jobs = 1;
    bool quick = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> format;
    bool negative_control = false;
};

namespace detail {

/// Runs @p body, mapping library exceptions to exit codes with a diagnostic on @p err.
template <class F>
int guarded(std::ostream& err, F&& body)
{
    try {
        return body();
    } catch (const TruncationError& e) {
        err << "error: truncation: " << e.what() << "\n";
        return kExitTruncation;
    } catch (const ConfigError& e) {
        err << "error: config: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const InvalidArgument& e) {
        err << "error: invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const UnsupportedOrder& e) {
        err << "error: invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

inline void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    out << text;
    if (!out) {
        throw Error("failed writing '" + path.string() + "'");
    }
}

inline std::vector<std::string> resolve_formats(const Flags& flags, const std::vector<std::string>& from_config)
{
    if (flags.format) {
        if (*flags.format != "json" && *flags.format != "csv") {
            throw ConfigError("--format must be json or csv");
        }
        return {*flags.format};
    }
    return from_config.empty() ? std::vector<std::string>{"json"} : from_config;
}

inline bool wants(const std::vector<std::string>& formats, const std::string& f)
{
    return std::find(formats.begin(), formats.end(), f) != formats.end();
}

inline std::optional<std::filesystem::path> resolve_out(const Flags& flags, const std::optional<std::string>& cfg)
{
    if (flags.out) {
        return std::filesystem::path(*flags.out);
    }
    if (cfg) {
        return std::filesystem::path(*cfg);
    }
    return std::nullopt;
}

inline std::string branches_csv(const std::vector<Branch>& branches)
{
    std::string out = "label,basis,probability,ideal_fidelity\n";
    for (const auto& b : branches) {
        out += b.label + "," + b.basis + "," + io::fmt15(b.probability) + "," +
               (b.ideal_fidelity ? io::fmt15(*b.ideal_fidelity) : std::string()) + "\n";
    }
    return out;
}

inline std::string safe_label(std::string s)
{
    for (char& c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') {
            c = '_';
        }
    }
    return s;
}

inline WignerGrid grid_for(const MotionalState& state, const io::GridSpec& spec, int jobs)
{
    return wigner(state, spec.x.values(), spec.p.values(), jobs);
}

} // namespace detail

// --- simulate -------------------------------------------------------------------

inline io::RunOutput execute(const io::RunConfig& cfg)
{
    if (cfg.is_sequence()) {
        const FockSpace space(*cfg.options.n_max);
        SequenceResult seq = run_sequence(ground_state(cfg.ions, space), cfg.pulses, cfg.options.displacement);
        return {"sequence", cfg.ions, std::nullopt, std::nullopt, space, std::move(seq.final_state),
                std::move(seq.trace), std::move(seq.branches), {}, {}};
    }
    return io::to_output(run_protocol(parse_protocol_name(cfg.protocol), cfg.ions, cfg.alpha_target, cfg.lasers,
                                      cfg.options));
}

inline int cmd_simulate(const Flags& flags, std::ostream& out, std::ostream& err)
{
    return detail::guarded(err, [&] {
        const io::RunConfig cfg = io::parse_run_config(io::read_json_file(flags.config), flags.config);
        const auto formats = detail::resolve_formats(flags, cfg.formats);
        const auto dir = detail::resolve_out(flags, cfg.output_dir);
        if (cfg.wigner && !dir) {
            throw ConfigError("a Wigner grid needs an output directory (--out or output_dir)");
        }

        io::RunOutput result = execute(cfg);
        for (const auto& w : result.warnings) {
            err << "warning: " << w << "\n";
        }
        if (cfg.sampler) {
            const std::uint64_t seed = flags.seed.value_or(cfg.sampler->seed);
            for (const char* basis : {"z", "x"}) {
                std::vector<Branch> group;
                for (const auto& b : result.branches) {
                    if (b.basis == basis) {
                        group.push_back(b);
                    }
                }
                if (!group.empty()) {
                    result.samples.push_back(
                        {basis, cfg.sampler->shots, seed, sample_outcomes(group, cfg.sampler->shots, seed)});
                }
            }
        }

        const std::string json_text = io::dump(io::result_json(result));
        const std::string csv_text = detail::branches_csv(result.branches);
        if (!dir) {
            out << (detail::wants(formats, "json") ? json_text : csv_text);
            return kExitOk;
        }
        std::filesystem::create_directories(*dir);
        if (detail::wants(formats, "json")) {
            detail::write_file(*dir / "result.json", json_text);
        }
        if (detail::wants(formats, "csv")) {
            detail::write_file(*dir / "branches.csv", csv_text);
        }
        if (cfg.wigner) {
            const Branch* chosen = nullptr;
            for (const auto& b : result.branches) {
                if (b.label == cfg.wigner->branch) {
                    chosen = &b;
                }
            }
            if (chosen == nullptr || !chosen->state) {
                throw ConfigError("wigner.branch '" + cfg.wigner->branch + "' is not a branch with a state");
            }
            WignerGrid grid = detail::grid_for(*chosen->state, *cfg.wigner, flags.jobs);
            grid.metadata["N"] = cfg.ions;
            if (result.alpha) {
                grid.metadata["alpha_abs"] = std::abs(*result.alpha);
            }
            grid.metadata["n_max"] = result.space.n_max();
            grid.metadata["probability"] = chosen->probability;
            const std::string stem = "wigner_" + detail::safe_label(chosen->label);
            if (detail::wants(formats, "csv")) {
                detail::write_file(*dir / (stem + ".csv"), io::wigner_csv(grid));
            }
            if (detail::wants(formats, "json")) {
                detail::write_file(*dir / (stem + ".json"), io::dump(io::wigner_json(grid)));
            }
        }
        err << "wrote results to " << dir->string() << "\n";
        return kExitOk;
    });
}

// --- validate -------------------------------------------------------------------

inline int cmd_validate(const Flags& flags, std::ostream& out, std::ostream& err)
{
    return detail::guarded(err, [&] {
        ValidationOptions opts;
        opts.quick = flags.quick;
        opts.seed = flags.seed.value_or(opts.seed);
        opts.jobs = flags.jobs;
        opts.negative_control = flags.negative_control;
        if (flags.negative_control) {
            err << "negative control: oracle Rabi frequency sign flipped, checks are expected to fail\n";
        }
        const ValidationReport report = run_validation(opts);
        const std::string format = flags.format.value_or("table");
        if (format == "json") {
            io::ordered_json j;
            j["quick"] = opts.quick;
            j["seed"] = opts.seed;
            j["threshold"] = kOracleFidelityThreshold;
            io::ordered_json arr = io::ordered_json::array();
            for (const auto& c : report.checks) {
                io::ordered_json r;
                r["N"] = c.ions;
                r["k"] = c.order;
                r["draw"] = c.draw;
                r["rabi"] = c.rabi;
                r["eta"] = c.eta;
                r["duration"] = c.duration;
                r["phase"] = c.phase;
                r["n_max"] = c.n_max;
                r["fidelity"] = c.fidelity;
                r["symmetry_residual"] = c.symmetry_residual;
                r["pass"] = c.pass;
                arr.push_back(r);
            }
            j["checks"] = arr;
            j["worst_fidelity"] = report.worst_fidelity();
            j["pass"] = report.all_pass();
            out << io::dump(j);
        } else if (format == "csv") {
            out << "N,k,draw,rabi,eta,duration,phase,n_max,fidelity,symmetry_residual,pass\n";
            for (const auto& c : report.checks) {
                out << c.ions << ',' << c.order << ',' << c.draw << ',' << io::fmt15(c.rabi) << ',' << io::fmt15(c.eta)
                    << ',' << io::fmt15(c.duration) << ',' << io::fmt15(c.phase) << ',' << c.n_max << ','
                    << io::fmt15(c.fidelity) << ',' << io::fmt15(c.symmetry_residual) << ','
                    << (c.pass ? "true" : "false") << '\n';
            }
        } else {
            out << " N  k  draw  n_max   1 - fidelity   sym. residual  result\n";
            for (const auto& c : report.checks) {
                std::ostringstream line;
                line << std::setw(2) << c.ions << std::setw(3) << c.order << std::setw(6) << c.draw << std::setw(7)
                     << c.n_max << std::setw(15) << std::scientific << std::setprecision(3)
                     << std::max(0.0, 1.0 - c.fidelity) << std::setw(16) << c.symmetry_residual << "  "
                     << (c.pass ? "PASS" : "FAIL");
                out << line.str() << "\n";
            }
        }
        std::ostringstream worst;
        worst << std::setprecision(15) << report.worst_fidelity();
        const auto failed = std::count_if(report.checks.begin(), report.checks.end(), [](auto& c) { return !c.pass; });
        err << (report.all_pass() ? "all " : "") << report.checks.size() - failed << "/" << report.checks.size()
            << " oracle checks passed; worst fidelity " << worst.str() << "\n";
        return report.all_pass() ? kExitOk : kExitFailure;
    });
}

// --- sweep ----------------------------------------------------------------------

struct SweepRow {
    double value = 0.0;
    int ions = 0;
    double alpha_abs = 0.0;
    double eta = 0.0;
    std::optional<double> detuning;
    int n_max = 0;
    std::vector<Branch> branches;
    std::optional<double> dispersive_fidelity;
};

inline io::RunConfig sweep_point(const io::SweepConfig& sweep, double v)
{
    io::RunConfig c = sweep.base;
    switch (sweep.axis) {
    case io::SweepAxis::ions:
        c.ions = static_cast<int>(v);
        break;
    case io::SweepAxis::alpha:
        c.alpha_target = Complex{0.0, v};
        break;
    case io::SweepAxis::eta:
        c.lasers.eta = v;
        break;
    case io::SweepAxis::delta:
        c.lasers.detuning = v;
        break;
    }
    return c;
}

inline SweepRow run_sweep_point(const io::SweepConfig& sweep, double v)
{
    const io::RunConfig c = sweep_point(sweep, v);
    ProtocolResult r = run_protocol(parse_protocol_name(c.protocol), c.ions, c.alpha_target, c.lasers, c.options);
    SweepRow row{v, c.ions, std::abs(c.alpha_target), c.lasers.eta, c.lasers.detuning, r.space.n_max(),
                 std::move(r.branches), std::nullopt};
    for (auto& b : row.branches) {
        b.state.reset();
    }
    if (sweep.oracle_check && c.ions <= oracle::kMaxDetunedIons) {
        row.dispersive_fidelity = dispersive_oracle_fidelity(c.ions, c.lasers.rabi, c.lasers.eta, *c.lasers.detuning);
    }
    return row;
}

inline std::vector<SweepRow> run_sweep(const io::SweepConfig& sweep, int jobs)
{
    std::vector<SweepRow> rows(sweep.values.size());
    std::vector<std::exception_ptr> errors(sweep.values.size());
    const int workers = std::clamp(jobs, 1, static_cast<int>(sweep.values.size()));
    auto work = [&](int first) {
        for (std::size_t i = static_cast<std::size_t>(first); i < rows.size(); i += static_cast<std::size_t>(workers)) {
            try {
                rows[i] = run_sweep_point(sweep, sweep.values[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return rows;
}

inline std::string sweep_csv(const io::SweepConfig& sweep, const std::vector<SweepRow>& rows)
{
    std::string out = std::string(io::to_string(sweep.axis)) + ",N,alpha_abs,eta,delta,n_max";
    for (const auto& b : rows.front().branches) {
        out += ",P_" + b.label + ",F_" + b.label;
    }
    if (sweep.oracle_check) {
        out += ",dispersive_fidelity";
    }
    out += "\n";
    for (const auto& r : rows) {
        out += io::fmt15(r.value) + "," + std::to_string(r.ions) + "," + io::fmt15(r.alpha_abs) + "," +
               io::fmt15(r.eta) + "," + (r.detuning ? io::fmt15(*r.detuning) : std::string()) + "," +
               std::to_string(r.n_max);
        for (const auto& b : r.branches) {
            out += "," + io::fmt15(b.probability) + "," + (b.ideal_fidelity ? io::fmt15(*b.ideal_fidelity) : "");
        }
        if (sweep.oracle_check) {
            out += "," + (r.dispersive_fidelity ? io::fmt15(*r.dispersive_fidelity) : std::string());
        }
        out += "\n";
    }
    return out;
}

inline io::ordered_json sweep_json(const io::SweepConfig& sweep, const std::vector<SweepRow>& rows)
{
    io::ordered_json j;
    j["axis"] = io::to_string(sweep.axis);
    j["protocol"] = sweep.base.protocol;
    io::ordered_json arr = io::ordered_json::array();
    for (const auto& r : rows) {
        io::ordered_json o;
        o["value"] = r.value;
        o["N"] = r.ions;
        o["alpha_abs"] = r.alpha_abs;
        o["eta"] = r.eta;
        o["delta"] = r.detuning ? io::ordered_json(*r.detuning) : io::ordered_json(nullptr);
        o["n_max"] = r.n_max;
        io::ordered_json branches = io::ordered_json::array();
        for (const auto& b : r.branches) {
            branches.push_back(io::branch_json(b));
        }
        o["branches"] = branches;
        if (r.dispersive_fidelity) {
            o["dispersive_fidelity"] = *r.dispersive_fidelity;
        }
        arr.push_back(o);
    }
    j["rows"] = arr;
    return j;
}

inline int cmd_sweep(const Flags& flags, std::ostream& out, std::ostream& err)
{
    return detail::guarded(err, [&] {
        const io::SweepConfig sweep = io::parse_sweep_config(io::read_json_file(flags.config), flags.config);
        const auto formats = detail::resolve_formats(flags, {"csv"});
        const auto dir = detail::resolve_out(flags, sweep.output_dir);
        const std::vector<SweepRow> rows = run_sweep(sweep, flags.jobs);
        const std::string csv_text = sweep_csv(sweep, rows);
        const std::string json_text = io::dump(sweep_json(sweep, rows));
        if (!dir) {
            out << (detail::wants(formats, "csv") ? csv_text : json_text);
            return kExitOk;
        }
        std::filesystem::create_directories(*dir);
        if (detail::wants(formats, "csv")) {
            detail::write_file(*dir / "sweep.csv", csv_text);
        }
        if (detail::wants(formats, "json")) {
            detail::write_file(*dir / "sweep.json", json_text);
        }
        err << "wrote " << rows.size() << " sweep points to " << dir->string() << "\n";
        return kExitOk;
    });
}

// --- wigner ---------------------------------------------------------------------

struct WignerConfig {
    std::filesystem::path state_file;
    std::optional<std::string> branch;
    io::GridSpec grid;
    std::optional<std::string> output_dir;
    std::vector<std::string> formats;
};

inline WignerConfig parse_wigner_config(const io::json& j, const std::string& origin)
{
    const io::Reader r(j, origin);
    WignerConfig c;
    c.state_file = r.string("state_file");
    if (r.has("branch")) {
        c.branch = r.string("branch");
    }
    c.grid = io::parse_grid(r, false);
    if (r.has("output_dir")) {
        c.output_dir = r.string("output_dir");
    }
    if (r.has("formats")) {
        c.formats = io::parse_formats(r.raw("formats"), r.at_path("formats"));
    }
    r.finish();
    return c;
}

inline int cmd_wigner(const Flags& flags, std::ostream& out, std::ostream& err)
{
    return detail::guarded(err, [&] {
        const WignerConfig cfg = parse_wigner_config(io::read_json_file(flags.config), flags.config);
        const auto formats = detail::resolve_formats(flags, cfg.formats.empty() ? std::vector<std::string>{"csv"}
                                                                               : cfg.formats);
        const auto dir = detail::resolve_out(flags, cfg.output_dir);
        const io::json doc = io::read_json_file(cfg.state_file.string());
        const bool is_result = doc.is_object() && doc.contains("branches");
        if (is_result && !cfg.branch) {
            throw ConfigError(flags.config + ": 'branch' is required when state_file is a result document");
        }
        const MotionalState state = io::state_from_document(doc, cfg.branch.value_or(""), cfg.state_file.string());
        WignerGrid grid = detail::grid_for(state, cfg.grid, flags.jobs);
        if (is_result) {
            grid.metadata["N"] = doc.at("ions").get<double>();
            if (doc.contains("alpha_abs")) {
                grid.metadata["alpha_abs"] = doc.at("alpha_abs").get<double>();
            }
        }
        grid.metadata["n_max"] = state.space.n_max();
        const std::string csv_text = io::wigner_csv(grid);
        if (!dir) {
            out << (detail::wants(formats, "csv") ? csv_text : io::dump(io::wigner_json(grid)));
            return kExitOk;
        }
        std::filesystem::create_directories(*dir);
        const std::string stem = "wigner_" + detail::safe_label(cfg.branch.value_or("state"));
        if (detail::wants(formats, "csv")) {
            detail::write_file(*dir / (stem + ".csv"), csv_text);
        }
        if (detail::wants(formats, "json")) {
            detail::write_file(*dir / (stem + ".json"), io::dump(io::wigner_json(grid)));
        }
        err << "wrote Wigner grid to " << dir->string() << "\n";
        return kExitOk;
    });
}

} // namespace ioncat::cli
