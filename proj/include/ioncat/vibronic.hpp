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
 * @file vibronic.hpp
 * @brief Joint state of the collective spin (Dicke ladder) and the
 * centre-of-mass mode, and the pulses that act on it.
 *
 * Resonant bichromatic pulses on the k-th sidebands evolve as
 *
 *     U_k(t) = sum_m D_k(m alpha_k(t)) |j,m>_T <j,m|_T,   alpha_k = 2 i Omega t eta^k / k!,
 *
 * where J_T = cos(phi - k pi/2) Jx + sin(phi - k pi/2) Jy. Detuned
 * (dispersive) pulses act as exp(-i lambda t Jy^2) on the spin only.
 */

#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ioncat/error.hpp"
#include "ioncat/fock.hpp"
#include "ioncat/linalg.hpp"
#include "ioncat/spin_algebra.hpp"

namespace ioncat {

using RowMajorCMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Amplitudes over |j,m>_z (x) |n>, flattened spin-major: index = spin_index * fock_dim + n.
class VibronicState {
  public:
    VibronicState(int ions, FockSpace space, CVector amplitudes)
        : ions_(ions), space_(space), amplitudes_(std::move(amplitudes))
    {
        if (ions < 1) {
            throw InvalidArgument("ion count must be positive");
        }
        if (amplitudes_.size() != static_cast<Eigen::Index>(spin_dim()) * space_.dim()) {
            throw InvalidArgument("vibronic amplitude vector has the wrong length");
        }
    }

    /// Builds a state from a spin_dim x fock_dim block matrix (row = spin index).
    static VibronicState from_blocks(int ions, FockSpace space, const CMatrix& blocks)
    {
        RowMajorCMatrix rm = blocks;
        CVector flat = Eigen::Map<const CVector>(rm.data(), rm.size());
        return VibronicState(ions, space, std::move(flat));
    }

    int ions() const { return ions_; }
    double j() const { return 0.5 * ions_; }
    int spin_dim() const { return ions_ + 1; }
    int fock_dim() const { return space_.dim(); }
    const FockSpace& space() const { return space_; }
    const CVector& amplitudes() const { return amplitudes_; }

    Complex amplitude(int spin_index, int n) const { return amplitudes_(spin_index * fock_dim() + n); }

    /// spin_dim x fock_dim view of the amplitudes.
    CMatrix blocks() const
    {
        return Eigen::Map<const RowMajorCMatrix>(amplitudes_.data(), spin_dim(), fock_dim());
    }

    double norm() const { return amplitudes_.norm(); }

  private:
    int ions_;
    FockSpace space_;
    CVector amplitudes_;
};

inline double fidelity(const VibronicState& a, const VibronicState& b) { return fidelity(a.amplitudes(), b.amplitudes()); }

/// |gg...g> (x) |0>, i.e. |N/2, -N/2>_z (x) |0>.
inline VibronicState ground_state(int ions, const FockSpace& space)
{
    CVector amps = CVector::Zero(static_cast<Eigen::Index>(ions + 1) * space.dim());
    if (ions < 1) {
        throw InvalidArgument("ion count must be positive");
    }
    amps(0) = 1.0;
    return VibronicState(ions, space, std::move(amps));
}

/// Product state |spin> (x) |motion>.
inline VibronicState product_state(int ions, const CVector& spin, const MotionalState& motion)
{
    if (spin.size() != ions + 1) {
        throw InvalidArgument("spin vector does not match the ion count");
    }
    return VibronicState::from_blocks(ions, motion.space, spin * motion.amplitudes.transpose());
}

// --- Expectation values -----------------------------------------------------

inline double mean_number(const VibronicState& s)
{
    const CMatrix b = s.blocks();
    double acc = 0.0;
    for (int n = 0; n < s.fock_dim(); ++n) {
        acc += n * b.col(n).squaredNorm();
    }
    return acc / s.amplitudes().squaredNorm();
}

inline Complex mean_annihilation(const VibronicState& s)
{
    const CMatrix b = s.blocks();
    Complex acc = 0.0;
    for (int n = 1; n < s.fock_dim(); ++n) {
        acc += std::sqrt(static_cast<double>(n)) * b.col(n - 1).dot(b.col(n));
    }
    return acc / s.amplitudes().squaredNorm();
}

/// <O (x) 1> for a spin operator O.
inline Complex spin_expectation(const VibronicState& s, const CMatrix& op)
{
    const CMatrix b = s.blocks();
    return (b.adjoint() * op * b).trace() / s.amplitudes().squaredNorm();
}

/// Tr_motion |psi><psi|, a spin_dim x spin_dim matrix.
inline CMatrix reduced_spin_density(const VibronicState& s)
{
    const CMatrix b = s.blocks();
    return b * b.adjoint() / s.amplitudes().squaredNorm();
}

// --- Pulse descriptions -----------------------------------------------------

/// Lasers on the k-th red and blue sidebands, on resonance.
struct ResonantPulse {
    int order = 1;
    double rabi = 1.0;
    double eta = 0.1;
    double duration = 0.0;
    double phase = kPi / 2.0;

    /// alpha_k(t) = 2 i Omega t eta^k / k!.
    Complex alpha() const { return 2.0 * kI * rabi * duration * std::pow(eta, order) / factorial(order); }
    /// Angle a of J_T = cos(a) Jx + sin(a) Jy.
    double axis_angle() const { return phase - order * kPi / 2.0; }
};

/// Effective rate of the detuned first-sideband pair in the Lamb-Dicke regime.
inline double dispersive_rate(double rabi, double eta, double detuning)
{
    if (detuning == 0.0) {
        throw InvalidArgument("dispersive rate needs a nonzero detuning");
    }
    return 4.0 * (rabi * eta) * (rabi * eta) / detuning;
}

/// Sanity warnings for the dispersive approximation (thresholds are heuristics).
inline std::vector<std::string> dispersive_regime_warnings(double rabi, double eta, double detuning)
{
    std::vector<std::string> out;
    if (eta > 0.2) {
        out.push_back("eta = " + std::to_string(eta) + " > 0.2: Lamb-Dicke expansion of the dispersive pulse is doubtful");
    }
    const double ratio = std::abs(dispersive_rate(rabi, eta, detuning) / detuning);
    if (ratio > 0.1) {
        out.push_back("|lambda/delta| = " + std::to_string(ratio) + " > 0.1: detuning too small for the dispersive limit");
    }
    return out;
}

/// exp(-i lambda t Jy^2) on the spin; motion untouched.
struct DispersivePulse {
    double rate = 0.0;
    double duration = 0.0;

    static DispersivePulse from_lasers(double rabi, double eta, double detuning, double duration)
    {
        return {dispersive_rate(rabi, eta, detuning), duration};
    }
    double twist() const { return rate * duration; }
};

/// exp(-i theta (cos(phi) Jx + sin(phi) Jy)) on the spin.
struct CarrierPulse {
    double angle = 0.0;
    double phase = 0.0;
};

enum class SpinTarget { all_excited, all_ground };

struct PostselectStep {
    SpinTarget target = SpinTarget::all_excited;
};

using PulseSpec = std::variant<ResonantPulse, DispersivePulse, CarrierPulse, PostselectStep>;

inline const char* to_string(SpinTarget t) { return t == SpinTarget::all_excited ? "all_excited" : "all_ground"; }

inline std::string pulse_kind(const PulseSpec& spec)
{
    return std::visit(
        [](const auto& p) -> std::string {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ResonantPulse>) {
                return "resonant_bichromatic";
            } else if constexpr (std::is_same_v<T, DispersivePulse>) {
                return "dispersive_bichromatic";
            } else if constexpr (std::is_same_v<T, CarrierPulse>) {
                return "carrier";
            } else {
                return "postselect";
            }
        },
        spec);
}

/// Throws InvalidArgument unless every physical parameter is finite and in range.
inline void validate(const PulseSpec& spec)
{
    auto finite = [](double v, const char* name) {
        if (!std::isfinite(v)) {
            throw InvalidArgument(std::string(name) + " must be finite");
        }
    };
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ResonantPulse>) {
                finite(p.rabi, "rabi");
                finite(p.eta, "eta");
                finite(p.duration, "duration");
                finite(p.phase, "phase");
                if (p.order < 1) {
                    throw InvalidArgument("sideband order must be >= 1");
                }
                if (p.eta <= 0.0) {
                    throw InvalidArgument("eta must be positive");
                }
                if (p.duration < 0.0) {
                    throw InvalidArgument("duration must be >= 0");
                }
            } else if constexpr (std::is_same_v<T, DispersivePulse>) {
                finite(p.rate, "rate");
                finite(p.duration, "duration");
                if (p.duration < 0.0) {
                    throw InvalidArgument("duration must be >= 0");
                }
            } else if constexpr (std::is_same_v<T, CarrierPulse>) {
                finite(p.angle, "angle");
                finite(p.phase, "phase");
            }
        },
        spec);
}

// --- Physical parameters ----------------------------------------------------

inline constexpr double kHbarSI = 1.054571817e-34;

struct PhysicalParams {
    double wavenumber = 1.0;     ///< effective Raman wavenumber q
    double mass = 1.0;           ///< single-ion mass m
    double trap_frequency = 1.0; ///< centre-of-mass angular frequency nu
    int ions = 1;
};

/// eta = q sqrt(hbar / (2 N m nu)); hbar = 1 by default, pass kHbarSI for SI inputs.
inline double lamb_dicke(const PhysicalParams& p, double hbar = 1.0)
{
    if (!(p.wavenumber > 0.0 && p.mass > 0.0 && p.trap_frequency > 0.0 && p.ions > 0 && hbar > 0.0)) {
        throw InvalidArgument("Lamb-Dicke parameter needs positive q, m, nu, N");
    }
    return p.wavenumber * std::sqrt(hbar / (2.0 * p.ions * p.mass * p.trap_frequency));
}

// --- Pulse application ------------------------------------------------------

namespace detail {

inline VibronicState apply_spin_unitary(const VibronicState& s, const CMatrix& u)
{
    return VibronicState::from_blocks(s.ions(), s.space(), u * s.blocks());
}

inline void check_resonant_cutoff(const VibronicState& s, const ResonantPulse& p)
{
    const double reach = s.j() * std::abs(p.alpha());
    const double nbar = mean_number(s);
    if (p.order == 1) {
        const double r = reach + std::sqrt(nbar);
        require_cutoff(s.space(), required_cutoff(r), "resonant pulse");
    } else if (p.order == 2) {
        require_cutoff(s.space(), required_cutoff_squeeze(2.0 * reach, nbar), "order-2 resonant pulse");
    }
}

} // namespace detail

/// Sum over J_T eigenvalues m of D_k(m alpha_k) on the motion.
inline VibronicState apply_resonant(const VibronicState& s, const ResonantPulse& p,
                                    const DisplacementOptions& opts = {})
{
    validate(PulseSpec{p});
    if (p.order > opts.max_order) {
        throw UnsupportedOrder("sideband order " + std::to_string(p.order) + " exceeds the configured maximum " +
                               std::to_string(opts.max_order));
    }
    if (p.duration == 0.0) {
        return s;
    }
    detail::check_resonant_cutoff(s, p);
    const SpinOperators ops = build_spin_operators(s.ions());
    const CMatrix v = axis_eigenbasis(ops, p.axis_angle());
    // Rows of `rotated` are amplitudes in the J_T eigenbasis.
    CMatrix rotated = v.adjoint() * s.blocks();
    const Complex alpha = p.alpha();
    for (int i = 0; i < s.spin_dim(); ++i) {
        const double m = ops.m(i);
        if (m == 0.0) {
            continue;
        }
        const CMatrix d = displacement_matrix(p.order, m * alpha, s.space(), opts);
        rotated.row(i) = (d * rotated.row(i).transpose()).transpose();
    }
    return VibronicState::from_blocks(s.ions(), s.space(), v * rotated);
}

inline VibronicState apply_dispersive(const VibronicState& s, const DispersivePulse& p)
{
    validate(PulseSpec{p});
    if (p.twist() == 0.0) {
        return s;
    }
    return detail::apply_spin_unitary(s, twist_y(build_spin_operators(s.ions()), p.twist()));
}

inline VibronicState apply_carrier(const VibronicState& s, double theta, double phi)
{
    validate(PulseSpec{CarrierPulse{theta, phi}});
    if (theta == 0.0) {
        return s;
    }
    return detail::apply_spin_unitary(s, spin_rotation(build_spin_operators(s.ions()), theta, phi));
}

inline VibronicState apply_carrier(const VibronicState& s, const CarrierPulse& p) { return apply_carrier(s, p.angle, p.phase); }

/// Renormalized motional state conditioned on a spin outcome, with its probability.
struct Postselection {
    MotionalState state;
    double probability = 0.0;
};

inline constexpr double kDegenerateProbability = 1e-14;

/// Conditions on the spin being in @p spin (need not be normalized).
inline Postselection project_spin(const VibronicState& s, const CVector& spin)
{
    if (spin.size() != s.spin_dim()) {
        throw InvalidArgument("spin vector does not match the ion count");
    }
    const CVector unit = spin / spin.norm();
    const CVector motion = (unit.adjoint() * s.blocks()).transpose();
    const double prob = motion.squaredNorm() / s.amplitudes().squaredNorm();
    if (prob < kDegenerateProbability) {
        std::ostringstream msg;
        msg << "post-selection probability " << prob << " is below " << kDegenerateProbability;
        throw DegenerateOutcome(msg.str());
    }
    return {MotionalState{s.space(), motion / motion.norm(), 0.0}, std::min(1.0, prob)};
}

/// Projects onto |j,+j>_z (all excited) or |j,-j>_z (all ground).
inline Postselection postselect(const VibronicState& s, SpinTarget target)
{
    CVector e = CVector::Zero(s.spin_dim());
    e(target == SpinTarget::all_excited ? s.spin_dim() - 1 : 0) = 1.0;
    return project_spin(s, e);
}

/// Outcome probability without forming the conditional state.
inline double outcome_probability(const VibronicState& s, SpinTarget target)
{
    const int row = target == SpinTarget::all_excited ? s.spin_dim() - 1 : 0;
    return s.blocks().row(row).squaredNorm() / s.amplitudes().squaredNorm();
}

/// Applies any non-postselect pulse.
inline VibronicState apply(const VibronicState& s, const PulseSpec& spec, const DisplacementOptions& opts = {})
{
    return std::visit(
        [&](const auto& p) -> VibronicState {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ResonantPulse>) {
                return apply_resonant(s, p, opts);
            } else if constexpr (std::is_same_v<T, DispersivePulse>) {
                return apply_dispersive(s, p);
            } else if constexpr (std::is_same_v<T, CarrierPulse>) {
                return apply_carrier(s, p);
            } else {
                throw InvalidArgument("postselect changes the state type; use postselect()");
            }
        },
        spec);
}

} // namespace ioncat
