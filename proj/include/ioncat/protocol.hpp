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
 * @file protocol.hpp
 * @brief Named cat-state preparation protocols and generic pulse sequences.
 *
 *   multi_cat          R                      -> z post-selection, line cat
 *   entangled_cat      D [C] R                -> spin-motion cat, branches on |j,+-j>_x
 *   cat_postselect     D [C] R                -> z post-selection, even/odd cats
 *   cat_deterministic  D [C] R D [C]          -> z measurement, even/odd cats
 *
 * R is a first-sideband resonant pulse with J_T = Jx (laser phase pi/2),
 * D a dispersive pulse with lambda t = pi/2 and C the carrier pi/2 pulse about
 * Jy that even ion counts need.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ioncat/error.hpp"
#include "ioncat/fock.hpp"
#include "ioncat/linalg.hpp"
#include "ioncat/spin_algebra.hpp"
#include "ioncat/vibronic.hpp"

namespace ioncat {

enum class ProtocolName { multi_cat, entangled_cat, cat_postselect, cat_deterministic };

inline const char* to_string(ProtocolName p)
{
    switch (p) {
    case ProtocolName::multi_cat:
        return "multi_cat";
    case ProtocolName::entangled_cat:
        return "entangled_cat";
    case ProtocolName::cat_postselect:
        return "cat_postselect";
    case ProtocolName::cat_deterministic:
        return "cat_deterministic";
    }
    return "unknown";
}

inline ProtocolName parse_protocol_name(const std::string& s)
{
    for (ProtocolName p : {ProtocolName::multi_cat, ProtocolName::entangled_cat, ProtocolName::cat_postselect,
                           ProtocolName::cat_deterministic}) {
        if (s == to_string(p)) {
            return p;
        }
    }
    throw InvalidArgument("unknown protocol '" + s + "'");
}

inline bool uses_dispersive(ProtocolName p) { return p != ProtocolName::multi_cat; }

struct LaserSettings {
    double rabi = 1.0;
    double eta = 0.1;
    /// Detuning of the dispersive pair; lambda is derived from it when rate is unset.
    std::optional<double> detuning;
    /// Dispersive rate lambda given directly.
    std::optional<double> rate;
};

enum class CarrierMode { automatic, on, off };

struct ProtocolOptions {
    std::optional<int> n_max;
    /// Explicit durations bypass solving them from alpha_target and lambda t = pi/2.
    std::optional<double> resonant_duration;
    std::optional<double> dispersive_duration;
    CarrierMode carrier = CarrierMode::automatic;
    DisplacementOptions displacement;
};

struct StepRecord {
    PulseSpec pulse;
    double norm_after = 1.0;
};

/// A conditional motional state. `basis` is "z" or "x" for the measured spin basis.
struct Branch {
    std::string label;
    std::string basis;
    double probability = 0.0;
    std::optional<MotionalState> state;
    /// Fidelity with the textbook state expected for this branch, when one is known.
    std::optional<double> ideal_fidelity;
};

struct ProtocolResult {
    std::string name;
    int ions = 0;
    Complex alpha;
    LaserSettings lasers;
    FockSpace space;
    VibronicState final_state;
    std::vector<StepRecord> trace;
    std::vector<Branch> branches;
    std::vector<std::string> warnings;
};

// --- Textbook target states -------------------------------------------------

/// (|beta> + sign |-beta>)/norm with sign = +1 (even) or -1 (odd).
inline MotionalState cat_state(Complex beta, int sign, const FockSpace& space)
{
    MotionalState c = coherent_state(beta, space);
    for (Eigen::Index n = 1; n < c.amplitudes.size(); n += 2) {
        c.amplitudes(n) *= (sign > 0) ? 0.0 : 1.0;
    }
    for (Eigen::Index n = 0; n < c.amplitudes.size(); n += 2) {
        c.amplitudes(n) *= (sign > 0) ? 1.0 : 0.0;
    }
    const double nrm = c.amplitudes.norm();
    if (nrm < 1e-300) {
        throw DegenerateOutcome("cat state has zero norm");
    }
    c.amplitudes /= nrm;
    return c;
}

/// Weight of |m alpha> in a line cat: (-1)^(j-m) / ((j-m)! (j+m)!) for the
/// all-excited outcome, the same without the sign for all-ground.
inline double line_cat_coefficient(int ions, int spin_index, SpinTarget target = SpinTarget::all_excited)
{
    const int up = ions - spin_index; // j - m
    const double sign = (target == SpinTarget::all_ground || up % 2 == 0) ? 1.0 : -1.0;
    return sign / (factorial(up) * factorial(spin_index));
}

/// Sum_m c_m |m alpha>, the motion left after R from the ground state and a z outcome.
inline MotionalState line_cat(int ions, Complex alpha, const FockSpace& space,
                              SpinTarget target = SpinTarget::all_excited)
{
    const double j = 0.5 * ions;
    CVector acc = CVector::Zero(space.dim());
    for (int i = 0; i <= ions; ++i) {
        const double m = i - j;
        acc += line_cat_coefficient(ions, i, target) * coherent_state(m * alpha, space).amplitudes;
    }
    return {space, acc / acc.norm(), 0.0};
}

// --- Pulse construction -----------------------------------------------------

/// tau = |alpha| / (2 Omega eta) for k = 1.
inline double resonant_duration_for(double alpha_abs, const LaserSettings& l)
{
    return alpha_abs / (2.0 * l.rabi * l.eta);
}

inline double protocol_rate(const LaserSettings& l, std::vector<std::string>& warnings)
{
    if (l.rate && l.detuning) {
        throw InvalidArgument("give either the dispersive rate or the detuning, not both");
    }
    if (l.rate) {
        return *l.rate;
    }
    if (!l.detuning) {
        throw InvalidArgument("dispersive pulses need a detuning or a rate");
    }
    for (auto& w : dispersive_regime_warnings(l.rabi, l.eta, *l.detuning)) {
        warnings.push_back(std::move(w));
    }
    return dispersive_rate(l.rabi, l.eta, *l.detuning);
}

inline bool carrier_engaged(int ions, CarrierMode mode)
{
    switch (mode) {
    case CarrierMode::on:
        return true;
    case CarrierMode::off:
        return false;
    case CarrierMode::automatic:
        break;
    }
    return ions % 2 == 0;
}

/// Pulse list of a named protocol, without its measurements.
inline std::vector<PulseSpec> protocol_pulses(ProtocolName name, int ions, double alpha_abs, const LaserSettings& l,
                                              const ProtocolOptions& opts, std::vector<std::string>& warnings)
{
    const ResonantPulse r{1, l.rabi, l.eta, opts.resonant_duration.value_or(resonant_duration_for(alpha_abs, l)),
                          kPi / 2.0};
    std::vector<PulseSpec> seq;
    if (!uses_dispersive(name)) {
        seq.emplace_back(r);
        return seq;
    }
    const double rate = protocol_rate(l, warnings);
    if (!(rate > 0.0) && !opts.dispersive_duration) {
        throw InvalidArgument("solving lambda t = pi/2 needs a positive dispersive rate");
    }
    const DispersivePulse d{rate, opts.dispersive_duration.value_or(kPi / (2.0 * rate))};
    const bool carrier = carrier_engaged(ions, opts.carrier);
    auto twist = [&] {
        seq.emplace_back(d);
        if (carrier) {
            seq.emplace_back(CarrierPulse{kPi / 2.0, kPi / 2.0});
        }
    };
    twist();
    seq.emplace_back(r);
    if (name == ProtocolName::cat_deterministic) {
        twist();
    }
    return seq;
}

/// Auto cutoff: the largest coherent amplitude j |alpha| under the truncation rule.
inline int auto_cutoff(int ions, double alpha_abs) { return std::max(1, cutoff_for(0.5 * ions * alpha_abs)); }

// --- Execution --------------------------------------------------------------

struct SequenceResult {
    VibronicState final_state;
    std::vector<StepRecord> trace;
    std::vector<Branch> branches;
    /// Product of all post-selection probabilities along the sequence.
    double survival = 1.0;
};

/**
 * Runs @p pulses from @p initial. A postselect step records its branch and
 * collapses the spin onto the target, so later pulses act on the conditional state.
 */
inline SequenceResult run_sequence(const VibronicState& initial, const std::vector<PulseSpec>& pulses,
                                   const DisplacementOptions& opts = {})
{
    SequenceResult out{initial, {}, {}, 1.0};
    for (const PulseSpec& spec : pulses) {
        validate(spec);
        if (const auto* ps = std::get_if<PostselectStep>(&spec)) {
            const Postselection sel = postselect(out.final_state, ps->target);
            out.survival *= sel.probability;
            out.branches.push_back({to_string(ps->target), "z", sel.probability, sel.state, std::nullopt});
            CVector spin = CVector::Zero(out.final_state.spin_dim());
            spin(ps->target == SpinTarget::all_excited ? out.final_state.spin_dim() - 1 : 0) = 1.0;
            out.final_state = product_state(out.final_state.ions(), spin, sel.state);
        } else {
            out.final_state = apply(out.final_state, spec, opts);
        }
        out.trace.push_back({spec, out.final_state.norm()});
    }
    return out;
}

namespace detail {

inline Branch z_branch(const VibronicState& s, SpinTarget target)
{
    Branch b{to_string(target), "z", outcome_probability(s, target), std::nullopt, std::nullopt};
    if (b.probability >= kDegenerateProbability) {
        b.state = postselect(s, target).state;
    }
    return b;
}

inline Branch x_branch(const VibronicState& s, const CMatrix& basis, int column, const std::string& label)
{
    const CVector spin = basis.col(column);
    const CVector motion = (spin.adjoint() * s.blocks()).transpose();
    Branch b{label, "x", motion.squaredNorm() / s.amplitudes().squaredNorm(), std::nullopt, std::nullopt};
    if (b.probability >= kDegenerateProbability) {
        b.state = project_spin(s, spin).state;
    }
    return b;
}

inline void score(Branch& b, const MotionalState& ideal)
{
    if (b.state) {
        b.ideal_fidelity = fidelity(*b.state, ideal);
    }
}

} // namespace detail

/**
 * Runs a named protocol from |gg...g> (x) |0>. Only |alpha_target| matters:
 * the resonant displacement always lies on the imaginary axis.
 */
inline ProtocolResult run_protocol(ProtocolName name, int ions, Complex alpha_target, const LaserSettings& lasers,
                                   const ProtocolOptions& opts = {})
{
    if (ions < 1) {
        throw InvalidArgument("ion count must be positive");
    }
    if (!(lasers.rabi > 0.0) || !(lasers.eta > 0.0) || !std::isfinite(lasers.rabi) || !std::isfinite(lasers.eta)) {
        throw InvalidArgument("rabi and eta must be positive and finite");
    }
    const double alpha_abs = std::abs(alpha_target);
    if (!std::isfinite(alpha_abs)) {
        throw InvalidArgument("alpha_target must be finite");
    }
    ProtocolResult res{to_string(name), ions, Complex{0.0, alpha_abs}, lasers,
                       FockSpace(opts.n_max.value_or(auto_cutoff(ions, alpha_abs))),
                       ground_state(ions, FockSpace(1)), {}, {}, {}};
    if (alpha_target.real() != 0.0 || alpha_target.imag() < 0.0) {
        res.warnings.push_back("alpha_target is off the positive imaginary axis; only |alpha| is used");
    }
    require_cutoff(res.space, required_cutoff(0.5 * ions * alpha_abs), "alpha_target");

    const std::vector<PulseSpec> pulses = protocol_pulses(name, ions, alpha_abs, lasers, opts, res.warnings);
    SequenceResult seq = run_sequence(ground_state(ions, res.space), pulses, opts.displacement);
    res.final_state = seq.final_state;
    res.trace = std::move(seq.trace);

    const VibronicState& s = res.final_state;
    Complex alpha{0.0, 0.0};
    for (const PulseSpec& spec : pulses) {
        if (const auto* r = std::get_if<ResonantPulse>(&spec)) {
            alpha = r->alpha();
        }
    }
    const Complex beta = 0.5 * ions * alpha;
    const bool odd = ions % 2 == 1;

    switch (name) {
    case ProtocolName::multi_cat: {
        Branch up = detail::z_branch(s, SpinTarget::all_excited);
        detail::score(up, line_cat(ions, alpha, res.space));
        Branch down = detail::z_branch(s, SpinTarget::all_ground);
        detail::score(down, line_cat(ions, alpha, res.space, SpinTarget::all_ground));
        res.branches.push_back(std::move(up));
        res.branches.push_back(std::move(down));
        break;
    }
    case ProtocolName::entangled_cat: {
        const CMatrix basis = axis_eigenbasis(build_spin_operators(ions), 0.0);
        Branch plus = detail::x_branch(s, basis, ions, "x_plus");
        Branch minus = detail::x_branch(s, basis, 0, "x_minus");
        detail::score(plus, coherent_state(beta, res.space));
        detail::score(minus, coherent_state(-beta, res.space));
        res.branches.push_back(std::move(plus));
        res.branches.push_back(std::move(minus));
        break;
    }
    case ProtocolName::cat_postselect:
    case ProtocolName::cat_deterministic: {
        Branch up = detail::z_branch(s, SpinTarget::all_excited);
        Branch down = detail::z_branch(s, SpinTarget::all_ground);
        if (odd || name == ProtocolName::cat_deterministic) {
            detail::score(up, cat_state(beta, -1, res.space));
            detail::score(down, cat_state(beta, +1, res.space));
        }
        res.branches.push_back(std::move(up));
        res.branches.push_back(std::move(down));
        break;
    }
    }
    return res;
}

// --- Sampling ---------------------------------------------------------------

/// Counts from @p shots simulated measurements over @p branches (one basis); "other" takes the remainder.
inline std::map<std::string, std::int64_t> sample_outcomes(const std::vector<Branch>& branches, std::int64_t shots,
                                                           std::uint64_t seed)
{
    if (shots < 0) {
        throw InvalidArgument("shot count must be >= 0");
    }
    std::vector<double> weights;
    std::vector<std::string> labels;
    double total = 0.0;
    for (const Branch& b : branches) {
        labels.push_back(b.label);
        weights.push_back(b.probability);
        total += b.probability;
    }
    labels.emplace_back("other");
    weights.push_back(std::max(0.0, 1.0 - total));
    std::map<std::string, std::int64_t> counts;
    for (const auto& l : labels) {
        counts[l] = 0;
    }
    std::mt19937_64 rng(seed);
    // Inverse-CDF sampling from raw 64-bit draws keeps results identical across standard libraries.
    double cum_total = 0.0;
    for (double w : weights) {
        cum_total += w;
    }
    for (std::int64_t s = 0; s < shots; ++s) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * cum_total;
        double acc = 0.0;
        std::size_t pick = weights.size() - 1;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) {
                pick = i;
                break;
            }
        }
        ++counts[labels[pick]];
    }
    return counts;
}

} // namespace ioncat
