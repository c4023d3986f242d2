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

#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace ioncat {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;

/// Normalized overlap |<a|b>|^2 / (<a|a><b|b>); insensitive to global phase.
inline double fidelity(const CVector& a, const CVector& b)
{
    const double na = a.squaredNorm();
    const double nb = b.squaredNorm();
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    return std::norm(a.dot(b)) / (na * nb);
}

/// Applies a scalar function to the spectrum of a Hermitian matrix.
template <class F>
CMatrix hermitian_function(const CMatrix& h, F&& f)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    const RVector& ev = solver.eigenvalues();
    CVector fv(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        fv(i) = f(ev(i));
    }
    const CMatrix& v = solver.eigenvectors();
    return v * fv.asDiagonal() * v.adjoint();
}

/// exp(-i t H) for Hermitian H.
inline CMatrix hermitian_propagator(const CMatrix& h, double t)
{
    return hermitian_function(h, [t](double e) { return std::exp(-kI * (e * t)); });
}

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double unitarity_defect(const CMatrix& u)
{
    return max_abs(u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols()));
}

} // namespace ioncat
