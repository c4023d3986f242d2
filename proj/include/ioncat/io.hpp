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
 * @file io.hpp
 * @brief JSON configuration parsing (strict schema) and JSON/CSV serialization.
 *
 * Complex numbers are [re, im] pairs throughout. Every object is checked for
 * unknown keys and wrong types before any computation starts; failures raise
 * ConfigError with the JSON path of the offending value.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ioncat/error.hpp"
#include "ioncat/fock.hpp"
#include "ioncat/protocol.hpp"
#include "ioncat/vibronic.hpp"
#include "ioncat/wigner.hpp"

namespace ioncat::io {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kResultSchema = "ioncat.result/1";
inline constexpr const char* kWignerSchema = "ioncat.wigner/1";
inline constexpr const char* kStateSchema = "ioncat.motional_state/1";

// --- Strict-schema helpers --------------------------------------------------

class Reader {
  public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) {
            fail("expected an object");
        }
    }

    [[noreturn]] void fail(const std::string& what) const { throw ConfigError(path_ + ": " + what); }

    std::string at_path(const std::string& key) const { return path_ + "." + key; }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) const
    {
        seen_.insert(key);
        if (!j_.contains(key)) {
            fail("missing required key '" + key + "'");
        }
        return j_.at(key);
    }

    double number(const std::string& key) const
    {
        const json& v = raw(key);
        if (!v.is_number()) {
            throw ConfigError(at_path(key) + ": expected a number");
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            throw ConfigError(at_path(key) + ": must be finite");
        }
        return d;
    }

    std::optional<double> optional_number(const std::string& key) const
    {
        return has(key) ? std::optional<double>(number(key)) : std::nullopt;
    }

    std::int64_t integer(const std::string& key) const
    {
        const json& v = raw(key);
        if (!v.is_number_integer()) {
            throw ConfigError(at_path(key) + ": expected an integer");
        }
        return v.get<std::int64_t>();
    }

    std::string string(const std::string& key) const
    {
        const json& v = raw(key);
        if (!v.is_string()) {
            throw ConfigError(at_path(key) + ": expected a string");
        }
        return v.get<std::string>();
    }

    bool boolean(const std::string& key) const
    {
        const json& v = raw(key);
        if (!v.is_boolean()) {
            throw ConfigError(at_path(key) + ": expected true or false");
        }
        return v.get<bool>();
    }

    Complex complex(const std::string& key) const
    {
        const json& v = raw(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            throw ConfigError(at_path(key) + ": expected [re, im]");
        }
        return {v[0].get<double>(), v[1].get<double>()};
    }

    std::pair<double, double> range(const std::string& key) const
    {
        const json& v = raw(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            throw ConfigError(at_path(key) + ": expected [lo, hi]");
        }
        const double lo = v[0].get<double>();
        const double hi = v[1].get<double>();
        if (!(lo < hi)) {
            throw ConfigError(at_path(key) + ": need lo < hi");
        }
        return {lo, hi};
    }

    Reader object(const std::string& key) const { return Reader(raw(key), at_path(key)); }

    /// Rejects keys that were never read.
    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) {
                fail("unknown key '" + it.key() + "'");
            }
        }
    }

  private:
    const json& j_;
    std::string path_;
    mutable std::set<std::string> seen_;
};

inline json parse_json_text(const std::string& text, const std::string& origin)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": invalid JSON: " + e.what());
    }
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open '" + path + "'");
    }
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_json_text(text, path);
}

// --- Run configuration -------------------------------------------------------

struct GridSpec {
    std::string branch;
    Axis x;
    Axis p;
};

struct SamplerSpec {
    std::int64_t shots = 0;
    std::uint64_t seed = 0;
};

struct RunConfig {
    /// Named protocol, or "sequence" for an explicit pulse list.
    std::string protocol;
    int ions = 0;
    Complex alpha_target;
    LaserSettings lasers;
    ProtocolOptions options;
    std::vector<PulseSpec> pulses;
    std::optional<GridSpec> wigner;
    std::optional<SamplerSpec> sampler;
    std::optional<std::string> output_dir;
    std::vector<std::string> formats;

    bool is_sequence() const { return protocol == "sequence"; }
};

inline SpinTarget parse_target(const std::string& s, const std::string& path)
{
    if (s == "all_excited") {
        return SpinTarget::all_excited;
    }
    if (s == "all_ground") {
        return SpinTarget::all_ground;
    }
    throw ConfigError(path + ": target must be all_excited or all_ground");
}

inline PulseSpec parse_pulse(const json& j, const std::string& path)
{
    const Reader r(j, path);
    const std::string kind = r.string("kind");
    PulseSpec spec;
    if (kind == "resonant_bichromatic") {
        ResonantPulse p;
        p.order = static_cast<int>(r.integer("order"));
        p.rabi = r.number("rabi");
        p.eta = r.number("eta");
        p.duration = r.number("duration");
        p.phase = r.number("phase");
        spec = p;
    } else if (kind == "dispersive_bichromatic") {
        DispersivePulse p;
        p.duration = r.number("duration");
        if (r.has("rate")) {
            if (r.has("detuning") || r.has("rabi") || r.has("eta")) {
                r.fail("give either rate or (rabi, eta, detuning)");
            }
            p.rate = r.number("rate");
        } else {
            p.rate = dispersive_rate(r.number("rabi"), r.number("eta"), r.number("detuning"));
        }
        spec = p;
    } else if (kind == "carrier") {
        spec = CarrierPulse{r.number("angle"), r.number("phase")};
    } else if (kind == "postselect") {
        spec = PostselectStep{parse_target(r.string("target"), r.at_path("target"))};
    } else {
        throw ConfigError(r.at_path("kind") + ": unknown pulse kind '" + kind + "'");
    }
    r.finish();
    try {
        validate(spec);
    } catch (const InvalidArgument& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return spec;
}

inline std::vector<std::string> parse_formats(const json& j, const std::string& path)
{
    if (!j.is_array() || j.empty()) {
        throw ConfigError(path + ": expected a non-empty array of formats");
    }
    std::vector<std::string> out;
    for (const auto& f : j) {
        if (!f.is_string() || (f != "json" && f != "csv")) {
            throw ConfigError(path + ": formats are \"json\" and \"csv\"");
        }
        out.push_back(f.get<std::string>());
    }
    return out;
}

inline Axis parse_axis(const Reader& g, const std::string& key, int points)
{
    const auto [lo, hi] = g.range(key);
    return Axis{lo, hi, points};
}

inline GridSpec parse_grid(const Reader& g, bool need_branch)
{
    GridSpec spec;
    if (need_branch) {
        spec.branch = g.string("branch");
    }
    const json& pts = g.raw("points");
    int nx = 0;
    int np = 0;
    if (pts.is_number_integer()) {
        nx = np = pts.get<int>();
    } else if (pts.is_array() && pts.size() == 2 && pts[0].is_number_integer() && pts[1].is_number_integer()) {
        nx = pts[0].get<int>();
        np = pts[1].get<int>();
    } else {
        throw ConfigError(g.at_path("points") + ": expected an integer or [nx, np]");
    }
    if (nx < 2 || np < 2 || nx > 4001 || np > 4001) {
        throw ConfigError(g.at_path("points") + ": each axis needs 2..4001 points");
    }
    spec.x = parse_axis(g, "x", nx);
    spec.p = parse_axis(g, "p", np);
    return spec;
}

/// Body shared by run and sweep configs: everything that defines the physics.
inline void parse_physics(const Reader& r, RunConfig& c)
{
    c.protocol = r.string("protocol");
    const std::int64_t ions = r.integer("ions");
    if (ions < 1 || ions > kDefaultMaxIons) {
        throw ConfigError(r.at_path("ions") + ": must be in 1.." + std::to_string(kDefaultMaxIons));
    }
    c.ions = static_cast<int>(ions);
    if (r.has("n_max")) {
        const std::int64_t n = r.integer("n_max");
        if (n < 1 || n > 4000) {
            throw ConfigError(r.at_path("n_max") + ": must be in 1..4000");
        }
        c.options.n_max = static_cast<int>(n);
    }

    if (c.is_sequence()) {
        if (!c.options.n_max) {
            r.fail("a pulse sequence needs an explicit n_max");
        }
        const json& list = r.raw("pulses");
        if (!list.is_array() || list.empty()) {
            throw ConfigError(r.at_path("pulses") + ": expected a non-empty array");
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            c.pulses.push_back(parse_pulse(list[i], r.at_path("pulses") + "[" + std::to_string(i) + "]"));
        }
        if (r.has("max_order")) {
            c.options.displacement.max_order = static_cast<int>(r.integer("max_order"));
        }
        return;
    }

    ProtocolName name{};
    try {
        name = parse_protocol_name(c.protocol);
    } catch (const InvalidArgument&) {
        throw ConfigError(r.at_path("protocol") + ": unknown protocol '" + c.protocol + "'");
    }
    c.alpha_target = r.complex("alpha_target");
    const Reader l = r.object("lasers");
    c.lasers.rabi = l.number("rabi");
    c.lasers.eta = l.number("eta");
    if (!(c.lasers.rabi > 0.0) || !(c.lasers.eta > 0.0)) {
        l.fail("rabi and eta must be positive");
    }
    if (uses_dispersive(name)) {
        if (l.has("detuning") == l.has("rate")) {
            l.fail("dispersive protocols need exactly one of 'detuning' and 'rate'");
        }
        c.lasers.detuning = l.optional_number("detuning");
        c.lasers.rate = l.optional_number("rate");
        if (c.lasers.detuning && *c.lasers.detuning == 0.0) {
            throw ConfigError(l.at_path("detuning") + ": must be nonzero");
        }
    }
    l.finish();

    if (r.has("durations")) {
        const Reader d = r.object("durations");
        c.options.resonant_duration = d.optional_number("resonant");
        c.options.dispersive_duration = d.optional_number("dispersive");
        d.finish();
    }
    if (r.has("carrier")) {
        const std::string mode = r.string("carrier");
        if (mode == "auto") {
            c.options.carrier = CarrierMode::automatic;
        } else if (mode == "on") {
            c.options.carrier = CarrierMode::on;
        } else if (mode == "off") {
            c.options.carrier = CarrierMode::off;
        } else {
            throw ConfigError(r.at_path("carrier") + ": expected auto, on or off");
        }
    }
}

inline RunConfig parse_run_config(const json& j, const std::string& origin = "config")
{
    const Reader r(j, origin);
    RunConfig c;
    parse_physics(r, c);
    if (r.has("wigner")) {
        const Reader w = r.object("wigner");
        c.wigner = parse_grid(w, true);
        w.finish();
    }
    if (r.has("sampler")) {
        const Reader s = r.object("sampler");
        SamplerSpec sp;
        sp.shots = s.integer("shots");
        if (sp.shots < 0 || sp.shots > 100000000) {
            throw ConfigError(s.at_path("shots") + ": must be in 0..1e8");
        }
        const std::int64_t seed = s.integer("seed");
        if (seed < 0) {
            throw ConfigError(s.at_path("seed") + ": must be >= 0");
        }
        sp.seed = static_cast<std::uint64_t>(seed);
        s.finish();
        c.sampler = sp;
    }
    if (r.has("output_dir")) {
        c.output_dir = r.string("output_dir");
    }
    if (r.has("formats")) {
        c.formats = parse_formats(r.raw("formats"), r.at_path("formats"));
    }
    r.finish();
    return c;
}

// --- Sweep configuration ----------------------------------------------------

enum class SweepAxis { ions, alpha, eta, delta };

inline const char* to_string(SweepAxis a)
{
    switch (a) {
    case SweepAxis::ions:
        return "N";
    case SweepAxis::alpha:
        return "alpha";
    case SweepAxis::eta:
        return "eta";
    case SweepAxis::delta:
        return "delta";
    }
    return "?";
}

struct SweepConfig {
    SweepAxis axis = SweepAxis::ions;
    std::vector<double> values;
    RunConfig base;
    bool oracle_check = false;
    std::optional<std::string> output_dir;
};

inline std::vector<double> parse_sweep_values(const Reader& r)
{
    if (r.has("values") == r.has("range")) {
        r.fail("give exactly one of 'values' and 'range'");
    }
    std::vector<double> values;
    if (r.has("values")) {
        const json& v = r.raw("values");
        if (!v.is_array()) {
            throw ConfigError(r.at_path("values") + ": expected an array");
        }
        for (const auto& x : v) {
            if (!x.is_number() || !std::isfinite(x.get<double>())) {
                throw ConfigError(r.at_path("values") + ": expected finite numbers");
            }
            values.push_back(x.get<double>());
        }
    } else {
        const Reader g = r.object("range");
        const double start = g.number("start");
        const double stop = g.number("stop");
        const double step = g.number("step");
        g.finish();
        if (!(step > 0.0)) {
            throw ConfigError(g.at_path("step") + ": must be positive");
        }
        const double count = std::floor((stop - start) / step + 1e-9) + 1.0;
        if (count > 100000) {
            throw ConfigError(r.at_path("range") + ": more than 1e5 points");
        }
        for (int i = 0; i < static_cast<int>(count); ++i) {
            values.push_back(start + i * step);
        }
    }
    if (values.empty()) {
        throw ConfigError(r.at_path(r.has("values") ? "values" : "range") + ": sweep range is empty");
    }
    return values;
}

inline SweepConfig parse_sweep_config(const json& j, const std::string& origin = "config")
{
    const Reader r(j, origin);
    SweepConfig c;
    const std::string axis = r.string("axis");
    if (axis == "N") {
        c.axis = SweepAxis::ions;
    } else if (axis == "alpha") {
        c.axis = SweepAxis::alpha;
    } else if (axis == "eta") {
        c.axis = SweepAxis::eta;
    } else if (axis == "delta") {
        c.axis = SweepAxis::delta;
    } else {
        throw ConfigError(r.at_path("axis") + ": expected N, alpha, eta or delta");
    }
    c.values = parse_sweep_values(r);
    {
        const Reader b = r.object("base");
        parse_physics(b, c.base);
        b.finish();
    }
    if (c.base.is_sequence()) {
        throw ConfigError(r.at_path("base") + ": sweeps run named protocols only");
    }
    for (double v : c.values) {
        if (c.axis == SweepAxis::ions && (v < 1 || v != std::floor(v) || v > kDefaultMaxIons)) {
            throw ConfigError(r.at_path("values") + ": N values must be positive integers");
        }
        if ((c.axis == SweepAxis::eta && !(v > 0.0)) || (c.axis == SweepAxis::alpha && v < 0.0) ||
            (c.axis == SweepAxis::delta && v == 0.0)) {
            throw ConfigError(r.at_path("values") + ": value " + std::to_string(v) + " out of range for this axis");
        }
    }
    if (c.axis == SweepAxis::delta && !c.base.lasers.detuning) {
        throw ConfigError(r.at_path("base") + ": a delta sweep needs lasers.detuning");
    }
    if (r.has("oracle_check")) {
        c.oracle_check = r.boolean("oracle_check");
    }
    if (c.oracle_check && !c.base.lasers.detuning) {
        throw ConfigError(r.at_path("oracle_check") + ": needs lasers.detuning to integrate the detuned Hamiltonian");
    }
    if (r.has("output_dir")) {
        c.output_dir = r.string("output_dir");
    }
    r.finish();
    return c;
}

// --- Number formatting --------------------------------------------------------

/// Fixed 15-significant-digit text, independent of the locale.
inline std::string fmt15(double v)
{
    if (v == 0.0) {
        return "0";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

// --- Serialization ------------------------------------------------------------

inline ordered_json complex_json(Complex c) { return ordered_json::array({c.real(), c.imag()}); }

inline ordered_json amplitudes_json(const CVector& v)
{
    ordered_json arr = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        arr.push_back(complex_json(v(i)));
    }
    return arr;
}

inline ordered_json motional_state_json(const MotionalState& s)
{
    ordered_json j;
    j["schema"] = kStateSchema;
    j["n_max"] = s.space.n_max();
    j["norm"] = s.norm();
    j["mean_number"] = s.mean_number();
    j["mean_annihilation"] = complex_json(s.mean_annihilation());
    j["odd_weight"] = odd_weight(s);
    j["amplitudes"] = amplitudes_json(s.amplitudes);
    return j;
}

inline MotionalState motional_state_from_json(const json& j, const std::string& origin)
{
    if (!j.is_object() || !j.contains("n_max") || !j.contains("amplitudes")) {
        throw ConfigError(origin + ": expected a motional state with n_max and amplitudes");
    }
    const int n_max = j.at("n_max").get<int>();
    const json& arr = j.at("amplitudes");
    if (!arr.is_array() || static_cast<int>(arr.size()) != n_max + 1) {
        throw ConfigError(origin + ": amplitudes must have n_max + 1 entries");
    }
    CVector v(n_max + 1);
    for (int i = 0; i <= n_max; ++i) {
        const json& c = arr[static_cast<std::size_t>(i)];
        if (!c.is_array() || c.size() != 2) {
            throw ConfigError(origin + ": amplitudes are [re, im] pairs");
        }
        v(i) = Complex{c[0].get<double>(), c[1].get<double>()};
    }
    const double nrm = v.norm();
    if (std::abs(nrm - 1.0) > 1e-6) {
        throw ConfigError(origin + ": state norm " + std::to_string(nrm) + " is not 1");
    }
    return {FockSpace(n_max), v / nrm, 0.0};
}

inline ordered_json pulse_json(const PulseSpec& spec, double norm_after)
{
    ordered_json j;
    j["kind"] = pulse_kind(spec);
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ResonantPulse>) {
                j["order"] = p.order;
                j["rabi"] = p.rabi;
                j["eta"] = p.eta;
                j["phase"] = p.phase;
                j["duration"] = p.duration;
                j["omega_t"] = p.rabi * p.duration;
                j["alpha"] = complex_json(p.alpha());
            } else if constexpr (std::is_same_v<T, DispersivePulse>) {
                j["rate"] = p.rate;
                j["duration"] = p.duration;
                j["lambda_t"] = p.twist();
            } else if constexpr (std::is_same_v<T, CarrierPulse>) {
                j["angle"] = p.angle;
                j["phase"] = p.phase;
            } else {
                j["target"] = to_string(p.target);
            }
        },
        spec);
    j["norm_after"] = norm_after;
    return j;
}

inline ordered_json branch_json(const Branch& b)
{
    ordered_json j;
    j["label"] = b.label;
    j["basis"] = b.basis;
    j["probability"] = b.probability;
    if (b.ideal_fidelity) {
        j["ideal_fidelity"] = *b.ideal_fidelity;
    }
    if (b.state) {
        j["state"] = motional_state_json(*b.state);
    } else {
        j["state"] = nullptr;
    }
    return j;
}

inline ordered_json vibronic_state_json(const VibronicState& s)
{
    ordered_json j;
    j["ions"] = s.ions();
    j["n_max"] = s.space().n_max();
    j["ordering"] = "spin index (m = -j..+j) major, Fock number minor";
    j["norm"] = s.norm();
    j["mean_number"] = mean_number(s);
    j["amplitudes"] = amplitudes_json(s.amplitudes());
    return j;
}

struct SampleTable {
    std::string basis;
    std::int64_t shots = 0;
    std::uint64_t seed = 0;
    std::map<std::string, std::int64_t> counts;
};

struct RunOutput {
    std::string protocol;
    int ions = 0;
    std::optional<Complex> alpha;
    std::optional<LaserSettings> lasers;
    FockSpace space;
    VibronicState final_state;
    std::vector<StepRecord> trace;
    std::vector<Branch> branches;
    std::vector<std::string> warnings;
    std::vector<SampleTable> samples;
};

inline RunOutput to_output(ProtocolResult r)
{
    return {r.name, r.ions, r.alpha, r.lasers, r.space, std::move(r.final_state), std::move(r.trace),
            std::move(r.branches), std::move(r.warnings), {}};
}

inline ordered_json result_json(const RunOutput& r)
{
    ordered_json j;
    j["schema"] = kResultSchema;
    j["protocol"] = r.protocol;
    j["ions"] = r.ions;
    if (r.alpha) {
        j["alpha"] = complex_json(*r.alpha);
        j["alpha_abs"] = std::abs(*r.alpha);
    }
    j["n_max"] = r.space.n_max();
    if (r.lasers) {
        ordered_json l;
        l["rabi"] = r.lasers->rabi;
        l["eta"] = r.lasers->eta;
        if (r.lasers->detuning) {
            l["detuning"] = *r.lasers->detuning;
        }
        if (r.lasers->rate) {
            l["rate"] = *r.lasers->rate;
        }
        j["lasers"] = l;
    }
    ordered_json trace = ordered_json::array();
    for (const auto& s : r.trace) {
        trace.push_back(pulse_json(s.pulse, s.norm_after));
    }
    j["trace"] = trace;
    ordered_json branches = ordered_json::array();
    for (const auto& b : r.branches) {
        branches.push_back(branch_json(b));
    }
    j["branches"] = branches;
    if (!r.samples.empty()) {
        ordered_json samples = ordered_json::array();
        for (const auto& t : r.samples) {
            ordered_json s;
            s["basis"] = t.basis;
            s["shots"] = t.shots;
            s["seed"] = t.seed;
            ordered_json counts;
            for (const auto& [k, v] : t.counts) {
                counts[k] = v;
            }
            s["counts"] = counts;
            samples.push_back(s);
        }
        j["samples"] = samples;
    }
    j["warnings"] = r.warnings;
    j["final_state"] = vibronic_state_json(r.final_state);
    return j;
}

/// Result text: two-space indented JSON with a trailing newline.
inline std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

/// Finds the motional state of branch @p label in a result document, or reads a bare state file.
inline MotionalState state_from_document(const json& doc, const std::string& label, const std::string& origin)
{
    if (doc.is_object() && doc.contains("branches")) {
        for (const auto& b : doc.at("branches")) {
            if (b.contains("label") && b.at("label") == label) {
                if (b.at("state").is_null()) {
                    throw ConfigError(origin + ": branch '" + label + "' has no conditional state");
                }
                return motional_state_from_json(b.at("state"), origin + ":" + label);
            }
        }
        throw ConfigError(origin + ": no branch labelled '" + label + "'");
    }
    return motional_state_from_json(doc, origin);
}

// --- Wigner grids -------------------------------------------------------------

/// CSV with header x,p,w; one row per cell, x outer and p inner.
inline std::string wigner_csv(const WignerGrid& g)
{
    std::string out = "x,p,w\n";
    out.reserve(g.x.size() * g.p.size() * 48);
    for (std::size_t ix = 0; ix < g.x.size(); ++ix) {
        for (std::size_t ip = 0; ip < g.p.size(); ++ip) {
            out += fmt15(g.x[ix]);
            out += ',';
            out += fmt15(g.p[ip]);
            out += ',';
            out += fmt15(g.values(static_cast<Eigen::Index>(ix), static_cast<Eigen::Index>(ip)));
            out += '\n';
        }
    }
    return out;
}

inline ordered_json wigner_json(const WignerGrid& g)
{
    ordered_json j;
    j["schema"] = kWignerSchema;
    j["convention"] = g.convention;
    ordered_json meta;
    for (const auto& [k, v] : g.metadata) {
        meta[k] = v;
    }
    j["metadata"] = meta;
    auto axis = [](const std::vector<double>& v) {
        ordered_json a;
        a["lo"] = v.front();
        a["hi"] = v.back();
        a["points"] = v.size();
        return a;
    };
    j["x"] = axis(g.x);
    j["p"] = axis(g.p);
    j["integral"] = g.integral();
    j["min"] = g.values.minCoeff();
    j["max"] = g.values.maxCoeff();
    ordered_json rows = ordered_json::array();
    for (Eigen::Index ix = 0; ix < g.values.rows(); ++ix) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index ip = 0; ip < g.values.cols(); ++ip) {
            row.push_back(g.values(ix, ip));
        }
        rows.push_back(row);
    }
    j["values"] = rows;
    return j;
}

/// Reads a grid back from the CSV format; axes are recovered from the first column values.
inline WignerGrid wigner_from_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "x,p,w") {
        throw ConfigError("Wigner CSV must start with the header x,p,w");
    }
    std::vector<std::array<double, 3>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::array<double, 3> r{};
        std::istringstream ls(line);
        char c1 = 0;
        char c2 = 0;
        if (!(ls >> r[0] >> c1 >> r[1] >> c2 >> r[2]) || c1 != ',' || c2 != ',') {
            throw ConfigError("malformed Wigner CSV row: " + line);
        }
        rows.push_back(r);
    }
    WignerGrid g;
    for (const auto& r : rows) {
        if (g.x.empty() || r[0] != g.x.back()) {
            g.x.push_back(r[0]);
        }
        if (g.x.size() == 1) {
            g.p.push_back(r[1]);
        }
    }
    if (g.x.size() * g.p.size() != rows.size()) {
        throw ConfigError("Wigner CSV is not a rectangular grid");
    }
    g.values.resize(static_cast<Eigen::Index>(g.x.size()), static_cast<Eigen::Index>(g.p.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        g.values(static_cast<Eigen::Index>(i / g.p.size()), static_cast<Eigen::Index>(i % g.p.size())) = rows[i][2];
    }
    return g;
}

} // namespace ioncat::io
