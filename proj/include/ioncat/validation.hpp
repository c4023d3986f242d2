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
 * @file validation.hpp
 * @brief Engine-versus-oracle checks on randomly drawn pulses and initial states.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "ioncat/fock.hpp"
#include "ioncat/linalg.hpp"
#include "ioncat/oracle.hpp"
#include "ioncat/vibronic.hpp"

namespace ioncat {

inline constexpr double kOracleFidelityThreshold = 1.0 - 1e-6;
inline constexpr double kSymmetryResidualThreshold = 1e-8;

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); }

struct ValidationOptions {
    bool quick = false;
    std::uint64_t seed = 20260101;
    int draws = 3;
    int jobs = 1;
    /// Flip the sign of the Rabi frequency in the oracle; every check should then fail.
    bool negative_control = false;
};

struct OracleCheck {
    int ions = 0;
    int order = 1;
    int draw = 0;
    double rabi = 0.0;
    double eta = 0.0;
    double duration = 0.0;
    double phase = 0.0;
    int n_max = 0;
    double fidelity = 0.0;
    double symmetry_residual = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<OracleCheck> checks;

    bool all_pass() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.pass; });
    }
    double worst_fidelity() const
    {
        double w = 1.0;
        for (const auto& c : checks) {
            w = std::min(w, c.fidelity);
        }
        return w;
    }
};

/// Largest |j alpha_k| drawn per order; keeps the dense oracle small.
inline double validation_reach(int order) { return order == 1 ? 1.5 : 0.3; }

/// Random spin vector times a random superposition of Fock states 0..3.
inline VibronicState random_initial_state(int ions, const FockSpace& space, std::mt19937_64& rng)
{
    CMatrix blocks = CMatrix::Zero(ions + 1, space.dim());
    CVector spin(ions + 1);
    for (int i = 0; i <= ions; ++i) {
        spin(i) = Complex{uniform_in(rng, -1, 1), uniform_in(rng, -1, 1)};
    }
    CVector motion = CVector::Zero(space.dim());
    for (int n = 0; n < std::min(4, space.dim()); ++n) {
        motion(n) = Complex{uniform_in(rng, -1, 1), uniform_in(rng, -1, 1)};
    }
    blocks = spin * motion.transpose();
    blocks /= blocks.norm();
    return VibronicState::from_blocks(ions, space, blocks);
}

/// One engine-versus-oracle comparison; the pulse is drawn from @p rng.
inline OracleCheck run_oracle_check(int ions, int order, int draw, std::mt19937_64& rng, bool negative_control)
{
    OracleCheck c;
    c.ions = ions;
    c.order = order;
    c.draw = draw;
    c.rabi = uniform_in(rng, 0.5, 2.0);
    c.eta = uniform_in(rng, 0.05, 0.2);
    c.phase = uniform_in(rng, 0.0, 2.0 * kPi);
    const double reach = uniform_in(rng, 0.3, 1.0) * validation_reach(order);
    // |j alpha_k| = reach with alpha_k = 2 Omega t eta^k / k!.
    c.duration = reach * factorial(order) / (0.5 * ions * 2.0 * c.rabi * std::pow(c.eta, order));

    const double nbar_bound = 3.0;
    const double needed = order == 1 ? required_cutoff(reach + std::sqrt(nbar_bound))
                                     : required_cutoff_squeeze(2.0 * reach, nbar_bound);
    c.n_max = static_cast<int>(std::ceil(needed));
    const FockSpace space(c.n_max);
    const VibronicState psi0 = random_initial_state(ions, space, rng);

    const ResonantPulse pulse{order, c.rabi, c.eta, c.duration, c.phase};
    const VibronicState engine = apply_resonant(psi0, pulse);

    const double oracle_rabi = negative_control ? -c.rabi : c.rabi;
    const oracle::FullSpaceState full =
        oracle::integrate_resonant(oracle::embed(psi0), order, oracle_rabi, c.eta, c.duration, c.phase);
    c.symmetry_residual = oracle::symmetric_residual(full);
    c.fidelity = fidelity(oracle::embed(engine).amplitudes, full.amplitudes);
    c.pass = c.fidelity >= kOracleFidelityThreshold && c.symmetry_residual <= kSymmetryResidualThreshold;
    return c;
}

/**
 * Oracle equivalence suite: N in 1..4 (1..2 when quick), k in {1, 2}, opts.draws
 * random pulses each. Each (N, k) cell seeds its own generator from opts.seed,
 * so results do not depend on the number of jobs.
 */
inline ValidationReport run_validation(const ValidationOptions& opts)
{
    const int max_ions = opts.quick ? 2 : 4;
    struct Cell {
        int ions;
        int order;
    };
    std::vector<Cell> cells;
    for (int n = 1; n <= max_ions; ++n) {
        for (int k = 1; k <= 2; ++k) {
            cells.push_back({n, k});
        }
    }
    std::vector<std::vector<OracleCheck>> per_cell(cells.size());
    auto run_cell = [&](std::size_t i) {
        std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                          static_cast<std::uint32_t>(cells[i].ions), static_cast<std::uint32_t>(cells[i].order)};
        std::mt19937_64 rng(seq);
        for (int d = 0; d < opts.draws; ++d) {
            per_cell[i].push_back(run_oracle_check(cells[i].ions, cells[i].order, d, rng, opts.negative_control));
        }
    };
    const int workers = std::clamp(opts.jobs, 1, static_cast<int>(cells.size()));
    if (workers == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            run_cell(i);
        }
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = static_cast<std::size_t>(w); i < cells.size(); i += static_cast<std::size_t>(workers)) {
                    run_cell(i);
                }
            });
        }
    }
    ValidationReport report;
    for (auto& v : per_cell) {
        report.checks.insert(report.checks.end(), v.begin(), v.end());
    }
    return report;
}

/**
 * Fidelity between brute-force detuned evolution and exp(-i lambda t Jy^2),
 * from |gg...g> (x) |0> at lambda t = @p twist with lambda = 4 (Omega eta)^2 / delta.
 */
inline double dispersive_oracle_fidelity(int ions, double rabi, double eta, double detuning, double twist = kPi / 2.0,
                                         int n_max = 12)
{
    const double rate = dispersive_rate(rabi, eta, detuning);
    const double duration = twist / rate;
    const FockSpace space(n_max);
    const VibronicState psi0 = ground_state(ions, space);
    const VibronicState closed = apply_dispersive(psi0, DispersivePulse{rate, duration});
    const oracle::FullSpaceState full =
        oracle::integrate_detuned_auto(oracle::embed(psi0), rabi, eta, detuning, duration);
    return fidelity(oracle::embed(closed).amplitudes, full.amplitudes);
}

} // namespace ioncat
