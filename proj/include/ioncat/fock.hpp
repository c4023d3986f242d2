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
 * @file fock.hpp
 * @brief Truncated Fock space of the centre-of-mass mode: coherent states,
 * generalized displacements D_k(alpha) = exp(alpha a^dag^k - alpha^* a^k).
 */

#pragma once

#include <cmath>
#include <iostream>
#include <sstream>
#include <string>

#include "ioncat/error.hpp"
#include "ioncat/linalg.hpp"

namespace ioncat {

/// Largest tolerated norm loss from truncating a state.
inline constexpr double kNormTolerance = 1e-9;
inline constexpr int kDefaultCutoff = 96;

class FockSpace {
  public:
    explicit FockSpace(int n_max = kDefaultCutoff) : n_max_(n_max)
    {
        if (n_max < 1) {
            throw InvalidArgument("Fock truncation n_max must be >= 1");
        }
    }

    int n_max() const { return n_max_; }
    int dim() const { return n_max_ + 1; }

    /// <n-1|a|n> = sqrt(n).
    CMatrix annihilation() const
    {
        CMatrix a = CMatrix::Zero(dim(), dim());
        for (int n = 1; n <= n_max_; ++n) {
            a(n - 1, n) = std::sqrt(static_cast<double>(n));
        }
        return a;
    }

    CMatrix creation() const { return annihilation().adjoint(); }

    RVector parity_diagonal() const
    {
        RVector p(dim());
        for (int n = 0; n <= n_max_; ++n) {
            p(n) = (n % 2 == 0) ? 1.0 : -1.0;
        }
        return p;
    }

    bool operator==(const FockSpace&) const = default;

  private:
    int n_max_;
};

/// Smallest n_max that holds a coherent state of amplitude @p amplitude (6 sigma Poisson tail).
inline double required_cutoff(double amplitude) { return amplitude * amplitude + 6.0 * amplitude + 10.0; }

inline int cutoff_for(double amplitude) { return static_cast<int>(std::ceil(required_cutoff(amplitude))); }

/// Cutoff rule for a squeeze of parameter r acting on a state of mean number nbar.
inline double required_cutoff_squeeze(double r, double nbar = 0.0)
{
    const double mean = (2.0 * nbar + 1.0) * std::cosh(2.0 * r);
    const double spread = std::sqrt(2.0) * (2.0 * nbar + 1.0) * std::sinh(r) * std::cosh(r);
    return mean + 6.0 * spread + 10.0;
}

inline void require_cutoff(const FockSpace& space, double needed, const std::string& what)
{
    if (needed > space.n_max()) {
        std::ostringstream msg;
        msg << what << " needs n_max >= " << std::ceil(needed) << " but the Fock space is truncated at n_max = "
            << space.n_max();
        throw TruncationError(msg.str());
    }
}

struct MotionalState {
    FockSpace space;
    CVector amplitudes;
    /// Norm discarded by truncation when the state was built.
    double truncation_loss = 0.0;

    double norm() const { return amplitudes.norm(); }

    double mean_number() const
    {
        double s = 0.0;
        for (Eigen::Index n = 0; n < amplitudes.size(); ++n) {
            s += static_cast<double>(n) * std::norm(amplitudes(n));
        }
        return s / amplitudes.squaredNorm();
    }

    Complex mean_annihilation() const
    {
        Complex s = 0.0;
        for (Eigen::Index n = 1; n < amplitudes.size(); ++n) {
            s += std::conj(amplitudes(n - 1)) * std::sqrt(static_cast<double>(n)) * amplitudes(n);
        }
        return s / amplitudes.squaredNorm();
    }

    CMatrix density() const { return amplitudes * amplitudes.adjoint(); }
};

/// Coherent-state amplitudes exp(-|alpha|^2/2) alpha^n / sqrt(n!), renormalized on the truncated space.
inline MotionalState coherent_state(Complex alpha, const FockSpace& space)
{
    const double r = std::abs(alpha);
    require_cutoff(space, required_cutoff(r), "coherent state");
    CVector c = CVector::Zero(space.dim());
    if (r == 0.0) {
        c(0) = 1.0;
        return {space, c, 0.0};
    }
    const double arg = std::arg(alpha);
    for (int n = 0; n < space.dim(); ++n) {
        const double log_mag = -0.5 * r * r + n * std::log(r) - 0.5 * std::lgamma(n + 1.0);
        c(n) = std::polar(std::exp(log_mag), n * arg);
    }
    const double kept = c.squaredNorm();
    const double loss = std::max(0.0, 1.0 - kept);
    if (loss > kNormTolerance) {
        throw TruncationError("coherent state loses " + std::to_string(loss) + " of its norm to truncation");
    }
    c /= std::sqrt(kept);
    return {space, c, loss};
}

struct DisplacementOptions {
    /// Orders above this raise UnsupportedOrder. Orders >= 3 are opt-in.
    int max_order = 2;
};

inline double factorial(int k) { return std::tgamma(k + 1.0); }

/**
 * D_k(alpha) = exp(alpha a^dag^k - alpha^* a^k) on the truncated space.
 *
 * Built as the exponential of the truncated generator, so it is exactly
 * unitary on the truncated space; the cutoff check keeps the physically
 * relevant block away from the truncation edge for states near the vacuum.
 */
inline CMatrix displacement_matrix(int order, Complex alpha, const FockSpace& space,
                                   const DisplacementOptions& opts = {})
{
    if (order < 1) {
        throw InvalidArgument("displacement order must be >= 1");
    }
    if (order > opts.max_order) {
        throw UnsupportedOrder("displacement order " + std::to_string(order) + " exceeds the configured maximum " +
                               std::to_string(opts.max_order));
    }
    if (order == 1) {
        require_cutoff(space, required_cutoff(std::abs(alpha)), "displacement");
    } else if (order == 2) {
        require_cutoff(space, required_cutoff_squeeze(2.0 * std::abs(alpha)), "order-2 displacement");
    } else {
        std::cerr << "warning: order-" << order
                  << " displacement grows without bound; truncated results are not trustworthy\n";
    }
    const int d = space.dim();
    if (alpha == Complex{0.0, 0.0}) {
        return CMatrix::Identity(d, d);
    }
    CMatrix ak = CMatrix::Identity(d, d);
    const CMatrix a = space.annihilation();
    for (int i = 0; i < order; ++i) {
        ak = ak * a;
    }
    // exp(G) with G anti-Hermitian equals exp(-i H) with H = i G Hermitian.
    const CMatrix g = alpha * ak.adjoint() - std::conj(alpha) * ak;
    const CMatrix h = kI * g;
    return hermitian_propagator(0.5 * (h + h.adjoint()), 1.0);
}

/// p_n = |psi_n|^2.
inline RVector fock_distribution(const MotionalState& state) { return state.amplitudes.cwiseAbs2(); }

namespace detail {
inline double parity_weight(const MotionalState& state, int first)
{
    double s = 0.0;
    for (Eigen::Index n = first; n < state.amplitudes.size(); n += 2) {
        s += std::norm(state.amplitudes(n));
    }
    return s / state.amplitudes.squaredNorm();
}
} // namespace detail

/// Total weight on odd (parity = -1) Fock numbers.
inline double odd_weight(const MotionalState& state) { return detail::parity_weight(state, 1); }

inline double even_weight(const MotionalState& state) { return detail::parity_weight(state, 0); }

inline double fidelity(const MotionalState& a, const MotionalState& b) { return fidelity(a.amplitudes, b.amplitudes); }

} // namespace ioncat
