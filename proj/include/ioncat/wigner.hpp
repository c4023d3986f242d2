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
 * @file wigner.hpp
 * @brief Wigner function of a motional state on a rectangular phase-space grid.
 *
 * Convention: dimensionless quadratures x = (a + a^dag)/sqrt(2),
 * p = (a - a^dag)/(i sqrt(2)), [x,p] = i. With alpha = (x + i p)/sqrt(2),
 *
 *     W(x,p) = (1/pi) Tr[rho D(alpha) Parity D^dag(alpha)],
 *
 * normalized to 1 over dx dp, bounded by 1/pi. The displaced-parity kernel
 * <m| D Parity D^dag |n> is generated for each grid point by the two-index
 * Laguerre recurrence, which needs no truncated displacement matrix.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ioncat/error.hpp"
#include "ioncat/fock.hpp"
#include "ioncat/linalg.hpp"

namespace ioncat {

inline constexpr const char* kWignerConvention = "x=(a+a^dag)/sqrt2, p=(a-a^dag)/(i sqrt2), int W dx dp = 1";

/// Uniform 1D grid [lo, hi] with @p points samples (endpoints included).
struct Axis {
    double lo = -1.0;
    double hi = 1.0;
    int points = 2;

    double step() const { return points > 1 ? (hi - lo) / (points - 1) : 0.0; }
    std::vector<double> values() const
    {
        std::vector<double> v(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i) {
            v[static_cast<std::size_t>(i)] = (points > 1) ? lo + i * step() : lo;
        }
        return v;
    }
};

struct WignerGrid {
    std::vector<double> x;
    std::vector<double> p;
    /// values(ix, ip) = W(x[ix], p[ip]).
    RMatrix values;
    std::string convention = kWignerConvention;
    std::map<std::string, double> metadata;

    double dx() const { return x.size() > 1 ? x[1] - x[0] : 0.0; }
    double dp() const { return p.size() > 1 ? p[1] - p[0] : 0.0; }
    double integral() const { return values.sum() * dx() * dp(); }
};

/// Largest |alpha| the recurrence is trusted at for a state truncated at @p space.
inline double wigner_reliable_radius(const FockSpace& space)
{
    return std::min(std::sqrt(space.n_max() + 1.0) + 8.0, 18.0);
}

namespace detail {

/// W at one phase-space point; @p buf is scratch space of length rho.rows().
inline double wigner_point(const CMatrix& rho, Complex alpha, std::vector<Complex>& buf)
{
    const Eigen::Index dim = rho.rows();
    buf.assign(static_cast<std::size_t>(dim), Complex{0.0, 0.0});
    const Complex two_a = 2.0 * alpha;
    const Complex two_ac = std::conj(two_a);
    buf[0] = std::exp(-2.0 * std::norm(alpha)) / kPi;
    double w = rho(0, 0).real() * buf[0].real();
    for (Eigen::Index n = 1; n < dim; ++n) {
        buf[n] = two_a * buf[n - 1] / std::sqrt(static_cast<double>(n));
        w += 2.0 * (rho(0, n) * buf[n]).real();
    }
    for (Eigen::Index m = 1; m < dim; ++m) {
        const double sm = std::sqrt(static_cast<double>(m));
        Complex temp = buf[m];
        buf[m] = (two_ac * temp - sm * buf[m - 1]) / sm;
        w += (rho(m, m) * buf[m]).real();
        for (Eigen::Index n = m + 1; n < dim; ++n) {
            const Complex next = (two_a * buf[n - 1] - sm * temp) / std::sqrt(static_cast<double>(n));
            temp = buf[n];
            buf[n] = next;
            w += 2.0 * (rho(m, n) * buf[n]).real();
        }
    }
    return w;
}

} // namespace detail

/**
 * Evaluates W on the grid xs x ps for density matrix @p rho on @p space.
 * Rows of the grid are split across @p jobs threads; every cell is written once.
 */
inline WignerGrid wigner(const CMatrix& rho, const FockSpace& space, const std::vector<double>& xs,
                         const std::vector<double>& ps, int jobs = 1)
{
    if (rho.rows() != space.dim() || rho.cols() != space.dim()) {
        throw InvalidArgument("density matrix does not match the Fock space");
    }
    if (xs.empty() || ps.empty()) {
        throw InvalidArgument("Wigner grid axes must be non-empty");
    }
    const double limit = wigner_reliable_radius(space);
    for (double x : {xs.front(), xs.back()}) {
        for (double p : {ps.front(), ps.back()}) {
            if (std::hypot(x, p) / std::sqrt(2.0) > limit) {
                std::ostringstream msg;
                msg << "Wigner grid corner (" << x << ", " << p << ") lies outside the reliable region |alpha| <= "
                    << limit << " for n_max = " << space.n_max();
                throw TruncationError(msg.str());
            }
        }
    }

    WignerGrid grid;
    grid.x = xs;
    grid.p = ps;
    grid.values.resize(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ps.size()));
    // Only the upper triangle of rho is read; make sure it is the Hermitian part.
    const CMatrix herm = 0.5 * (rho + rho.adjoint());

    const int nx = static_cast<int>(xs.size());
    const int workers = std::clamp(jobs, 1, nx);
    auto work = [&](int first) {
        std::vector<Complex> buf;
        for (int ix = first; ix < nx; ix += workers) {
            for (std::size_t ip = 0; ip < ps.size(); ++ip) {
                const Complex alpha = Complex{xs[static_cast<std::size_t>(ix)], ps[ip]} / std::sqrt(2.0);
                grid.values(ix, static_cast<Eigen::Index>(ip)) = detail::wigner_point(herm, alpha, buf);
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
    return grid;
}

inline WignerGrid wigner(const MotionalState& state, const std::vector<double>& xs, const std::vector<double>& ps,
                         int jobs = 1)
{
    const CVector psi = state.amplitudes / state.amplitudes.norm();
    return wigner(CMatrix(psi * psi.adjoint()), state.space, xs, ps, jobs);
}

/// Suggested symmetric grid bounds: mean +- (6 sigma + 1) along each quadrature.
inline std::pair<Axis, Axis> suggest_axes(const MotionalState& state, int points)
{
    const CMatrix a = state.space.annihilation();
    const CVector& psi = state.amplitudes;
    const double nrm = psi.squaredNorm();
    const CMatrix xop = (a + a.adjoint()) / std::sqrt(2.0);
    const CMatrix pop = (a - a.adjoint()) / (kI * std::sqrt(2.0));
    auto moments = [&](const CMatrix& op) {
        const double mean = psi.dot(op * psi).real() / nrm;
        const double sq = psi.dot(op * (op * psi)).real() / nrm;
        return std::pair{mean, std::sqrt(std::max(0.0, sq - mean * mean))};
    };
    const auto [mx, sx] = moments(xop);
    const auto [mp, sp] = moments(pop);
    const double rx = std::abs(mx) + 6.0 * sx + 1.0;
    const double rp = std::abs(mp) + 6.0 * sp + 1.0;
    return {Axis{-rx, rx, points}, Axis{-rp, rp, points}};
}

} // namespace ioncat
