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
 * @file oracle.hpp
 * @brief Brute-force reference dynamics on the full 2^N (x) Fock space.
 *
 * Nothing here goes through the Dicke-ladder engine: collective operators are
 * sums of single-ion flip operators, and evolution is either dense
 * diagonalization of the time-independent sideband Hamiltonian or fixed-step
 * RK4 for the detuned, time-dependent one.
 *
 * Sign convention: the real Rabi frequency enters as
 *
 *     H = -(2 Omega eta^k / k!) J_T (a^k + a^dag^k),
 *     J_T = (i^k e^{-i phi} / 2) sum_j sigma_j^+ + h.c.,
 *
 * so that the exact propagator equals sum_m D_k(m alpha_k) |m>_T<m|_T with
 * alpha_k = +2 i Omega t eta^k / k!. Flipping the sign of Omega is the same
 * as shifting the laser phase by pi.
 */

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>

#include <Eigen/Sparse>

#include "ioncat/error.hpp"
#include "ioncat/linalg.hpp"
#include "ioncat/vibronic.hpp"

namespace ioncat::oracle {

inline constexpr int kMaxIons = 6;
inline constexpr int kMaxDetunedIons = 4;

using SparseCMatrix = Eigen::SparseMatrix<Complex>;

/// Amplitudes over |b> (x) |n>, b a bitstring with bit i set when ion i is excited.
struct FullSpaceState {
    int ions = 0;
    int fock_dim = 0;
    CVector amplitudes;

    double norm() const { return amplitudes.norm(); }
};

inline void check_ions(int ions, int limit = kMaxIons)
{
    if (ions < 1 || ions > limit) {
        throw InvalidArgument("oracle supports 1 <= N <= " + std::to_string(limit) + ", got N = " +
                              std::to_string(ions));
    }
}

/// sigma^+ = |e><g| on ion @p which, as a 2^N x 2^N matrix.
inline CMatrix sigma_plus(int ions, int which)
{
    const int dim = 1 << ions;
    CMatrix s = CMatrix::Zero(dim, dim);
    for (int b = 0; b < dim; ++b) {
        if ((b & (1 << which)) == 0) {
            s(b | (1 << which), b) = 1.0;
        }
    }
    return s;
}

struct CollectiveOperators {
    CMatrix jplus;
    CMatrix jx;
    CMatrix jy;
    CMatrix jz;
};

/// Collective spin on the full space, summed ion by ion.
inline CollectiveOperators collective_operators(int ions)
{
    check_ions(ions);
    const int dim = 1 << ions;
    CollectiveOperators c;
    c.jplus = CMatrix::Zero(dim, dim);
    c.jz = CMatrix::Zero(dim, dim);
    for (int i = 0; i < ions; ++i) {
        c.jplus += sigma_plus(ions, i);
    }
    for (int b = 0; b < dim; ++b) {
        const int excited = std::popcount(static_cast<unsigned>(b));
        c.jz(b, b) = 0.5 * (2 * excited - ions);
    }
    c.jx = 0.5 * (c.jplus + c.jplus.adjoint());
    c.jy = (c.jplus - c.jplus.adjoint()) / (2.0 * kI);
    return c;
}

/// J_T = (i^k e^{-i phi}/2) J+ + h.c.
inline CMatrix sideband_spin_operator(int ions, int order, double phase)
{
    const CMatrix jp = collective_operators(ions).jplus;
    const Complex c = std::pow(kI, order) * std::exp(-kI * phase) / 2.0;
    return c * jp + std::conj(c) * jp.adjoint();
}

/// Independent ladder operator on n = 0..fock_dim-1.
inline CMatrix ladder(int fock_dim)
{
    CMatrix a = CMatrix::Zero(fock_dim, fock_dim);
    for (int n = 1; n < fock_dim; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b)
{
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline double binomial(int n, int k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); }

/// Symmetric Dicke state |j, m> with e = m + j excitations, on the 2^N spin space.
inline CVector dicke_vector(int ions, int excitations)
{
    const int dim = 1 << ions;
    CVector v = CVector::Zero(dim);
    const double amp = 1.0 / std::sqrt(binomial(ions, excitations));
    for (int b = 0; b < dim; ++b) {
        if (std::popcount(static_cast<unsigned>(b)) == excitations) {
            v(b) = amp;
        }
    }
    return v;
}

inline FullSpaceState embed(const VibronicState& s)
{
    check_ions(s.ions());
    const int dim = 1 << s.ions();
    const int fd = s.fock_dim();
    CMatrix full = CMatrix::Zero(dim, fd);
    const CMatrix blocks = s.blocks();
    for (int e = 0; e <= s.ions(); ++e) {
        full += dicke_vector(s.ions(), e) * blocks.row(e);
    }
    FullSpaceState out{s.ions(), fd, CVector(dim * fd)};
    for (int b = 0; b < dim; ++b) {
        out.amplitudes.segment(b * fd, fd) = full.row(b).transpose();
    }
    return out;
}

/// Projection onto the symmetric subspace, expressed in the Dicke ladder.
inline VibronicState project(const FullSpaceState& s)
{
    check_ions(s.ions);
    const int dim = 1 << s.ions;
    const int fd = s.fock_dim;
    CMatrix full(dim, fd);
    for (int b = 0; b < dim; ++b) {
        full.row(b) = s.amplitudes.segment(b * fd, fd).transpose();
    }
    CMatrix blocks(s.ions + 1, fd);
    for (int e = 0; e <= s.ions; ++e) {
        blocks.row(e) = dicke_vector(s.ions, e).adjoint() * full;
    }
    return VibronicState::from_blocks(s.ions, FockSpace(fd - 1), blocks);
}

/// Norm of the component outside the symmetric subspace.
inline double symmetric_residual(const FullSpaceState& s)
{
    return (s.amplitudes - embed(project(s)).amplitudes).norm();
}

/// Full-space sideband Hamiltonian (see the sign convention above).
inline CMatrix resonant_hamiltonian(int ions, int fock_dim, int order, double rabi, double eta, double phase)
{
    const CMatrix jt = sideband_spin_operator(ions, order, phase);
    const CMatrix a = ladder(fock_dim);
    CMatrix ak = CMatrix::Identity(fock_dim, fock_dim);
    for (int i = 0; i < order; ++i) {
        ak = ak * a;
    }
    const double coupling = -2.0 * rabi * std::pow(eta, order) / std::tgamma(order + 1.0);
    return coupling * kron(jt, ak + ak.adjoint());
}

/// Exact exp(-i H t) psi0 by dense diagonalization of the sideband Hamiltonian.
inline FullSpaceState integrate_resonant(const FullSpaceState& psi0, int order, double rabi, double eta,
                                         double duration, double phase)
{
    check_ions(psi0.ions);
    if (duration == 0.0) {
        return psi0;
    }
    const CMatrix h = resonant_hamiltonian(psi0.ions, psi0.fock_dim, order, rabi, eta, phase);
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    const CMatrix& v = solver.eigenvectors();
    CVector coeff = v.adjoint() * psi0.amplitudes;
    for (Eigen::Index i = 0; i < coeff.size(); ++i) {
        coeff(i) *= std::exp(-kI * (solver.eigenvalues()(i) * duration));
    }
    FullSpaceState out = psi0;
    out.amplitudes = v * coeff;
    if (std::abs(out.norm() - psi0.norm()) > 1e-8) {
        throw ConvergenceError("resonant oracle lost norm");
    }
    return out;
}

/// Time-dependent first-sideband Hamiltonian for lasers at w0 +- (nu + delta):
/// H(t) = e^{-i delta t} B + e^{i delta t} B^dag with B = -2 Omega eta J_T (x) a^dag.
struct DetunedHamiltonian {
    SparseCMatrix raising_part;
    SparseCMatrix lowering_part;
    double detuning = 0.0;

    CVector apply(double t, const CVector& psi) const
    {
        const Complex ph = std::exp(-kI * (detuning * t));
        CVector out = ph * (raising_part * psi);
        out += std::conj(ph) * (lowering_part * psi);
        return out;
    }
};

inline DetunedHamiltonian detuned_hamiltonian(int ions, int fock_dim, double rabi, double eta, double detuning,
                                              double phase = 0.0)
{
    const CMatrix jt = sideband_spin_operator(ions, 1, phase);
    const CMatrix b = -2.0 * rabi * eta * kron(jt, ladder(fock_dim).adjoint());
    DetunedHamiltonian h;
    h.raising_part = b.sparseView(0.0, 0.0);
    h.lowering_part = CMatrix(b.adjoint()).sparseView(0.0, 0.0);
    h.detuning = detuning;
    return h;
}

namespace detail {

inline CVector rk4(const DetunedHamiltonian& h, CVector psi, double duration, int steps)
{
    const double dt = duration / steps;
    auto rhs = [&](double t, const CVector& y) -> CVector { return -kI * h.apply(t, y); };
    for (int s = 0; s < steps; ++s) {
        const double t = s * dt;
        const CVector k1 = rhs(t, psi);
        const CVector k2 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k1);
        const CVector k3 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k2);
        const CVector k4 = rhs(t + dt, psi + dt * k3);
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return psi;
}

} // namespace detail

/// Fixed-step RK4 without any convergence check.
inline FullSpaceState integrate_detuned_raw(const FullSpaceState& psi0, double rabi, double eta, double detuning,
                                            double duration, int steps, double phase = 0.0)
{
    check_ions(psi0.ions, kMaxDetunedIons);
    if (steps < 1) {
        throw InvalidArgument("need at least one integration step");
    }
    const DetunedHamiltonian h = detuned_hamiltonian(psi0.ions, psi0.fock_dim, rabi, eta, detuning, phase);
    FullSpaceState out = psi0;
    out.amplitudes = detail::rk4(h, psi0.amplitudes, duration, steps);
    return out;
}

inline constexpr double kStepHalvingTolerance = 1e-8;
inline constexpr double kNormDriftTolerance = 1e-7;

/**
 * RK4 with @p substeps steps, checked against a run at twice the resolution.
 * Returns the finer result; throws ConvergenceError when the two differ by
 * more than kStepHalvingTolerance or the norm drifts by more than
 * kNormDriftTolerance.
 */
inline FullSpaceState integrate_detuned(const FullSpaceState& psi0, double rabi, double eta, double detuning,
                                        double duration, int substeps, double phase = 0.0)
{
    const FullSpaceState coarse = integrate_detuned_raw(psi0, rabi, eta, detuning, duration, substeps, phase);
    const FullSpaceState fine = integrate_detuned_raw(psi0, rabi, eta, detuning, duration, 2 * substeps, phase);
    const double diff = (coarse.amplitudes - fine.amplitudes).norm();
    if (diff > kStepHalvingTolerance) {
        std::ostringstream msg;
        msg << "step halving changed the state by " << diff << " with " << substeps << " steps";
        throw ConvergenceError(msg.str());
    }
    const double drift = std::abs(fine.norm() - psi0.norm());
    if (drift > kNormDriftTolerance) {
        std::ostringstream msg;
        msg << "norm drift " << drift << " exceeds " << kNormDriftTolerance;
        throw ConvergenceError(msg.str());
    }
    return fine;
}

/// Step count heuristic, doubled until integrate_detuned converges.
inline FullSpaceState integrate_detuned_auto(const FullSpaceState& psi0, double rabi, double eta, double detuning,
                                             double duration, double phase = 0.0, int* steps_used = nullptr)
{
    const double coupling = 2.0 * rabi * eta * 0.5 * psi0.ions * 2.0 * std::sqrt(static_cast<double>(psi0.fock_dim));
    const double rate = std::abs(detuning) + coupling;
    int steps = std::max(16, static_cast<int>(std::ceil(duration * rate / 0.05)));
    for (int attempt = 0; attempt < 8; ++attempt) {
        try {
            FullSpaceState out = integrate_detuned(psi0, rabi, eta, detuning, duration, steps, phase);
            if (steps_used != nullptr) {
                *steps_used = 2 * steps;
            }
            return out;
        } catch (const ConvergenceError&) {
            steps *= 2;
        }
    }
    throw ConvergenceError("detuned integration did not converge after repeated step doubling");
}

} // namespace ioncat::oracle
