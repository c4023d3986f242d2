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

// End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ioncat/ioncat.hpp"
#include "oracles.hpp"

using namespace ioncat;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

const Branch& branch(const ProtocolResult& r, const std::string& label)
{
    for (const auto& b : r.branches) {
        if (b.label == label) {
            return b;
        }
    }
    throw Error("missing branch " + label);
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int hardware_jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

LaserSettings resonant_lasers() { return LaserSettings{1.0, 0.1, std::nullopt, std::nullopt}; }

LaserSettings rate_lasers() { return LaserSettings{1.0, 0.1, std::nullopt, 0.05}; }

CVector ground_spin(int ions)
{
    CVector g = CVector::Zero(ions + 1);
    g(0) = 1.0;
    return g;
}

// Spin part of the state right before the resonant pulse: twist, then the carrier for even N.
CMatrix split_unitary(int ions)
{
    CMatrix u = testref::twist(ions, kPi / 2.0);
    if (ions % 2 == 0) {
        u = testref::rotation(ions, kPi / 2.0, kPi / 2.0) * u;
    }
    return u;
}

void criterion_1(Outcome& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    ValidationOptions opts;
    opts.jobs = hardware_jobs();
    const ValidationReport rep = run_validation(opts);
    const double t = seconds_since(t0);
    int ions_max = 0;
    bool k2 = false;
    for (const auto& c : rep.checks) {
        ions_max = std::max(ions_max, c.ions);
        k2 = k2 || c.order == 2;
    }
    o.detail << rep.checks.size() << " checks, worst fidelity " << rep.worst_fidelity() << ", " << t << " s";
    o.require(rep.checks.size() == 24 && ions_max == 4 && k2, "coverage N=1..4, k=1,2, 3 draws");
    o.require(rep.all_pass() && rep.worst_fidelity() >= 1.0 - 1e-6, "fidelity >= 1-1e-6");
    o.require(t < 60.0, "runtime < 60 s");
}

void criterion_2(Outcome& o)
{
    ProtocolOptions opts;
    opts.n_max = 90;
    const ProtocolResult r = run_protocol(ProtocolName::multi_cat, 3, {0.0, 3.0}, resonant_lasers(), opts);
    const MotionalState& up = *branch(r, "all_excited").state;
    const double j = 1.5;
    std::vector<Complex> points;
    for (int i = 0; i <= 3; ++i) {
        points.push_back((i - j) * r.alpha);
    }
    const CVector c = testref::coherent_fit(up.amplitudes, points);
    double worst = 0.0;
    for (int i = 0; i <= 3; ++i) {
        const double m = i - j;
        const double sign = std::lround(j - m) % 2 == 0 ? 1.0 : -1.0;
        const double expected = sign / (testref::fact(static_cast<int>(std::lround(j - m))) *
                                        testref::fact(static_cast<int>(std::lround(j + m))));
        const double expected_ref = 1.0 / testref::fact(3);
        const Complex ratio = c(i) / c(3);
        worst = std::max(worst, std::abs(ratio - expected / expected_ref) / std::abs(expected / expected_ref));
    }
    o.detail << "N=3 |alpha|=3 worst relative ratio error " << worst;
    o.require(worst <= 1e-8, "ratios to 1e-8");

    for (int n : {2, 3, 4}) {
        const ProtocolResult rn = run_protocol(ProtocolName::multi_cat, n, {0.0, 3.0}, resonant_lasers());
        const MotionalState& s = *branch(rn, "all_excited").state;
        const double vac = std::norm(s.amplitudes(0)) / s.amplitudes.squaredNorm();
        o.detail << "; N=" << n << " vacuum weight " << vac;
        o.require(n % 2 == 0 ? vac > 1e-6 : vac <= 1e-24, "vacuum present iff N even");
    }
}

void criterion_3(Outcome& o)
{
    double worst = 0.0;
    for (double a : {0.5, 1.0, 3.0}) {
        const ProtocolResult r = run_protocol(ProtocolName::multi_cat, 1, {0.0, a}, resonant_lasers());
        const Branch& up = branch(r, "all_excited");
        worst = std::max(worst, even_weight(*up.state));
    }
    o.detail << "N=1 largest even-Fock weight " << worst;
    o.require(worst <= 1e-12, "even weight <= 1e-12");
}

void criterion_4(Outcome& o)
{
    double worst = 1.0;
    const FockSpace space(10);
    for (int n : {1, 3, 5}) {
        const double rate = 0.05;
        const VibronicState out = apply_dispersive(ground_state(n, space), DispersivePulse{rate, kPi / (2.0 * rate)});
        // x basis phases: |j,m>_x = exp(+i pi/2 Jy) |j,-m>_z.
        const CMatrix to_x = testref::rotation(n, -kPi / 2.0, kPi / 2.0);
        const CVector spin_target = (to_x.col(0) - to_x.col(n)) / std::sqrt(2.0);
        const VibronicState target = product_state(n, spin_target, coherent_state(0.0, space));
        worst = std::min(worst, fidelity(out, target));
    }
    o.detail << "N=1,3,5 worst fidelity " << std::setprecision(17) << worst;
    o.require(worst >= 1.0 - 1e-10, "fidelity >= 1-1e-10");
}

void criterion_5(Outcome& o)
{
    double worst_parity = 0.0;
    double worst_norm = 0.0;
    double worst_fid = 1.0;
    double worst_ent = 1.0;
    for (int n : {1, 3}) {
        for (double a : {1.0, 3.0}) {
            const double overlap = std::exp(-0.5 * std::pow(n * a, 2));
            const ProtocolResult ent = run_protocol(ProtocolName::entangled_cat, n, {0.0, a}, rate_lasers());
            for (const auto& b : ent.branches) {
                worst_ent = std::min(worst_ent, *b.ideal_fidelity);
            }
            const ProtocolResult r = run_protocol(ProtocolName::cat_postselect, n, {0.0, a}, rate_lasers());
            const Branch& up = branch(r, "all_excited");
            const Branch& down = branch(r, "all_ground");
            worst_parity = std::max({worst_parity, even_weight(*up.state), odd_weight(*down.state)});
            // Unnormalized conditional state is (|b> -+ |-b>) / sqrt(2^(N+1)) up to phase.
            const double scale = std::pow(2.0, n + 1);
            worst_norm = std::max({worst_norm, std::abs(std::sqrt(scale * up.probability) - std::sqrt(2.0 - 2.0 * overlap)),
                                   std::abs(std::sqrt(scale * down.probability) - std::sqrt(2.0 + 2.0 * overlap))});
            worst_fid = std::min({worst_fid, *up.ideal_fidelity, *down.ideal_fidelity});
        }
    }
    o.detail << "entangled branch fidelity " << worst_ent << ", parity leak " << worst_parity << ", norm error "
             << worst_norm << ", cat fidelity " << worst_fid;
    o.require(worst_ent >= 1.0 - 1e-8, "entangled branches are coherent states");
    o.require(worst_parity <= 1e-12, "parity-pure support");
    o.require(worst_norm <= 1e-8, "norms sqrt(2 -+ 2 exp(-|N alpha|^2/2))");
    o.require(worst_fid >= 1.0 - 1e-8, "cat fidelity");
}

void criterion_6(Outcome& o)
{
    double worst_exact = 0.0;
    double worst_scaling = 0.0;
    for (int n = 1; n <= 5; ++n) {
        const double a = 7.0 / n;
        const ProtocolResult r = run_protocol(ProtocolName::cat_postselect, n, {0.0, a}, rate_lasers());
        const double p = branch(r, "all_excited").probability;
        const CVector spin = split_unitary(n) * ground_spin(n);
        const double exact = testref::series_probability(n, spin, CMatrix::Identity(n + 1, n + 1), r.alpha, n);
        worst_exact = std::max(worst_exact, std::abs(p - exact));
        worst_scaling = std::max(worst_scaling, std::abs(p * std::pow(2.0, n) - 1.0));
        o.detail << "N=" << n << " P=" << p << "; ";
    }
    o.detail << "max |P - exact| " << worst_exact << ", max |2^N P - 1| " << worst_scaling;
    o.require(worst_exact <= 1e-9, "matches series value to 1e-9");
    o.require(worst_scaling <= 0.1, "within 10% of 2^-N");
}

void criterion_7(Outcome& o)
{
    double worst_sum = 0.0;
    double worst_exact = 0.0;
    bool near_half = true;
    for (int n : {1, 3, 5, 2, 4}) {
        for (double a : {0.5, 1.0, 2.0}) {
            const ProtocolResult r = run_protocol(ProtocolName::cat_deterministic, n, {0.0, a}, rate_lasers());
            const double up = branch(r, "all_excited").probability;
            const double down = branch(r, "all_ground").probability;
            const CMatrix u = split_unitary(n);
            const CVector spin = u * ground_spin(n);
            const double exact_up = testref::series_probability(n, spin, u, r.alpha, n);
            const double exact_down = testref::series_probability(n, spin, u, r.alpha, 0);
            worst_sum = std::max(worst_sum, std::abs(up + down - 1.0));
            worst_exact = std::max({worst_exact, std::abs(up - exact_up), std::abs(down - exact_down)});
            const double corr = std::exp(-0.5 * std::pow(n * a, 2));
            near_half = near_half && std::abs(up - 0.5) <= corr + 1e-9 && std::abs(down - 0.5) <= corr + 1e-9;
        }
    }
    o.detail << "N=1..5 max |sum - 1| " << worst_sum << ", max |P - series| " << worst_exact;
    o.require(worst_sum <= 1e-9, "probabilities sum to 1");
    o.require(worst_exact <= 1e-9, "matches series expansion");
    o.require(near_half, "1/2 within exp(-|N alpha|^2/2)");
}

void criterion_8(Outcome& o)
{
    std::vector<double> f;
    for (double eta : {0.2, 0.1, 0.05}) {
        f.push_back(dispersive_oracle_fidelity(2, 1.0, eta, 1.0));
    }
    o.detail << "N=2 fidelity at eta 0.2/0.1/0.05: " << std::setprecision(10) << f[0] << " " << f[1] << " " << f[2];
    o.require(f[0] < f[1] && f[1] < f[2], "monotone increase as eta decreases");
}

void criterion_9(Outcome& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    const Axis vac_axis{-6.0, 6.0, 201};
    const WignerGrid vac = wigner(coherent_state(0.0, FockSpace(10)), vac_axis.values(), vac_axis.values());
    const double peak = vac.values.maxCoeff();
    o.detail << "vacuum integral " << vac.integral() << ", peak " << peak;
    o.require(std::abs(vac.integral() - 1.0) <= 1e-3, "vacuum integral");
    o.require(std::abs(peak - 1.0 / kPi) <= 1e-4, "vacuum peak 1/pi");

    const ProtocolResult r = run_protocol(ProtocolName::multi_cat, 3, {0.0, 3.0}, resonant_lasers());
    const Axis axis{-11.0, 11.0, 201};
    const WignerGrid g = wigner(*branch(r, "all_excited").state, axis.values(), axis.values(), hardware_jobs());
    const Eigen::Index ix0 = 100;
    const double wmax = g.values.maxCoeff();
    std::vector<double> maxima;
    for (Eigen::Index ip = 1; ip + 1 < g.values.cols(); ++ip) {
        const double w = g.values(ix0, ip);
        if (w > g.values(ix0, ip - 1) && w >= g.values(ix0, ip + 1) && w > 1e-3 * wmax) {
            maxima.push_back(g.p[static_cast<std::size_t>(ip)]);
        }
    }
    o.detail << "; cat maxima on x=0 at p =";
    for (double p : maxima) {
        o.detail << " " << p;
    }
    bool located = maxima.size() == 4;
    const double a = std::abs(r.alpha);
    const std::vector<double> expected{-1.5 * a * std::sqrt(2.0), -0.5 * a * std::sqrt(2.0), 0.5 * a * std::sqrt(2.0),
                                       1.5 * a * std::sqrt(2.0)};
    for (std::size_t i = 0; located && i < 4; ++i) {
        located = std::abs(maxima[i] - expected[i]) <= 1.5 * axis.step();
    }
    const double wmin = g.values.minCoeff();
    const double t = seconds_since(t0);
    o.detail << ", min W " << wmin << ", " << t << " s";
    o.require(located, "four maxima at p = +-|alpha|/sqrt2, +-3|alpha|/sqrt2");
    o.require(wmin < -0.05, "negative fringes below -0.05");
    o.require(t < 120.0, "runtime < 120 s");
}

} // namespace

int main()
{
    const std::vector<std::function<void(Outcome&)>> criteria{criterion_1, criterion_2, criterion_3,
                                                              criterion_4, criterion_5, criterion_6,
                                                              criterion_7, criterion_8, criterion_9};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            criteria[i](o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        failures += o.pass ? 0 : 1;
        std::printf("Criterion %zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
