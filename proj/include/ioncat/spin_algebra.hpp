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
 * @file spin_algebra.hpp
 * @brief Collective spin operators of N two-level ions restricted to the
 * symmetric (Dicke) ladder j = N/2.
 *
 * Basis ordering is |j,m>_z with m = -j, ..., +j, so index 0 is the all-ground
 * state |gg...g> and index N the all-excited state |ee...e>. Ladder matrix
 * elements follow the Condon-Shortley convention
 * J+|j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>.
 */

#pragma once

#include <cmath>
#include <string>

#include "ioncat/error.hpp"
#include "ioncat/linalg.hpp"

namespace ioncat {

/// Memory guard for the dense (N+1)x(N+1) representation.
inline constexpr int kDefaultMaxIons = 200;

struct SpinOperators {
    int ions = 0;
    CMatrix jx;
    CMatrix jy;
    CMatrix jz;

    double j() const { return 0.5 * ions; }
    int dim() const { return ions + 1; }
    /// Magnetic quantum number of basis index @p index.
    double m(int index) const { return index - j(); }
    /// Basis index of magnetic quantum number @p m (must lie on the ladder).
    int index(double m) const { return static_cast<int>(std::lround(m + j())); }

    CMatrix raising() const { return jx + kI * jy; }
    CMatrix lowering() const { return jx - kI * jy; }
    CMatrix casimir() const { return jx * jx + jy * jy + jz * jz; }

    /// cos(a) Jx + sin(a) Jy.
    CMatrix in_plane(double axis_angle) const { return std::cos(axis_angle) * jx + std::sin(axis_angle) * jy; }
};

inline SpinOperators build_spin_operators(int ions, int max_ions = kDefaultMaxIons)
{
    if (ions < 1) {
        throw InvalidArgument("ion count must be positive, got " + std::to_string(ions));
    }
    if (ions > max_ions) {
        throw InvalidArgument("ion count " + std::to_string(ions) + " exceeds the configured maximum " +
                              std::to_string(max_ions));
    }
    SpinOperators ops;
    ops.ions = ions;
    const int d = ions + 1;
    const double j = 0.5 * ions;
    CMatrix jp = CMatrix::Zero(d, d);
    CMatrix jz = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const double m = i - j;
        jz(i, i) = m;
        if (i + 1 < d) {
            jp(i + 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
        }
    }
    const CMatrix jm = jp.adjoint();
    ops.jx = 0.5 * (jp + jm);
    ops.jy = (jp - jm) / (2.0 * kI);
    ops.jz = jz;
    return ops;
}

/// Real matrix d^j_{m',m}(theta) = <j,m'| exp(-i theta Jy) |j,m>, indexed like SpinOperators.
struct RotationMatrix {
    int two_j = 0;
    double theta = 0.0;
    RMatrix d;

    double j() const { return 0.5 * two_j; }
    double at(double m_row, double m_col) const
    {
        return d(std::lround(m_row + j()), std::lround(m_col + j()));
    }
};

/// Wigner small-d matrix built from the spectral decomposition of Jy.
inline RotationMatrix wigner_small_d(int two_j, double theta)
{
    if (two_j < 1) {
        throw InvalidArgument("wigner_small_d needs 2j >= 1");
    }
    RotationMatrix r;
    r.two_j = two_j;
    r.theta = theta;
    if (theta == 0.0) {
        r.d = RMatrix::Identity(two_j + 1, two_j + 1);
        return r;
    }
    const SpinOperators ops = build_spin_operators(two_j, two_j);
    // Imaginary parts are round-off only (Jy is purely imaginary antisymmetric).
    r.d = hermitian_propagator(ops.jy, theta).real();
    return r;
}

/**
 * Eigenbasis of the in-plane operator cos(a) Jx + sin(a) Jy.
 *
 * Column i is the eigenvector with eigenvalue m = -j + i. Phases are fixed
 * analytically: |j,m>_a = exp(-i a Jz) exp(+i pi/2 Jy) |j,-m>_z. In this
 * convention exp(-i pi/2 Jy^2) |j,-j>_z = (|j,j>_x - |j,-j>_x)/sqrt(2) up to a
 * global phase for every odd N.
 */
inline CMatrix axis_eigenbasis(const SpinOperators& ops, double axis_angle)
{
    const int d = ops.dim();
    const RMatrix back = wigner_small_d(ops.ions, -kPi / 2.0).d;
    CMatrix v(d, d);
    for (int col = 0; col < d; ++col) {
        for (int row = 0; row < d; ++row) {
            v(row, col) = std::exp(-kI * (axis_angle * ops.m(row))) * back(row, d - 1 - col);
        }
    }
    return v;
}

/// exp(-i theta (cos(phi) Jx + sin(phi) Jy)).
inline CMatrix spin_rotation(const SpinOperators& ops, double theta, double phi)
{
    const CMatrix v = axis_eigenbasis(ops, phi);
    CVector phases(ops.dim());
    for (int i = 0; i < ops.dim(); ++i) {
        phases(i) = std::exp(-kI * (theta * ops.m(i)));
    }
    return v * phases.asDiagonal() * v.adjoint();
}

/// exp(-i phase Jy^2).
inline CMatrix twist_y(const SpinOperators& ops, double phase)
{
    return hermitian_function(ops.jy, [phase](double mu) { return std::exp(-kI * (phase * mu * mu)); });
}

} // namespace ioncat
