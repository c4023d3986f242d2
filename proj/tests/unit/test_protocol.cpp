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

#include <catch_amalgamated.hpp>

#include "ioncat/protocol.hpp"
#include "oracles.hpp"

using namespace ioncat;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const LaserSettings kLasers{1.0, 0.1, std::nullopt, 0.05};

const Branch& branch(const ProtocolResult& r, const std::string& label)
{
    for (const auto& b : r.branches) {
        if (b.label == label) {
            return b;
        }
    }
    FAIL("missing branch " << label);
    return r.branches.front();
}

} // namespace

TEST_CASE("protocol names round-trip", "[protocol]")
{
    for (auto p : {ProtocolName::multi_cat, ProtocolName::entangled_cat, ProtocolName::cat_postselect,
                   ProtocolName::cat_deterministic}) {
        CHECK(parse_protocol_name(to_string(p)) == p);
    }
    CHECK_THROWS_AS(parse_protocol_name("cat"), InvalidArgument);
}

TEST_CASE("multi_cat line cat for three ions", "[protocol]")
{
    const ProtocolResult r = run_protocol(ProtocolName::multi_cat, 3, Complex{0.0, 3.0}, kLasers);
    CHECK(r.space.n_max() == 58);
    REQUIRE(r.trace.size() == 1);
    const auto& pulse = std::get<ResonantPulse>(r.trace[0].pulse);
    CHECK_THAT(pulse.duration, WithinRel(15.0, 1e-14));
    const Branch& up = branch(r, "all_excited");
    REQUIRE(up.state);
    const Complex alpha{0.0, 3.0};
    const CVector c = testref::coherent_fit(up.state->amplitudes, {-1.5 * alpha, -0.5 * alpha, 0.5 * alpha, 1.5 * alpha});
    CHECK_THAT(std::abs(c(1) / c(0)), WithinRel(3.0, 1e-8));
    CHECK_THAT(std::abs(c(2) / c(3)), WithinRel(3.0, 1e-8));
    CHECK(*up.ideal_fidelity >= 1.0 - 1e-10);
    CHECK(*branch(r, "all_ground").ideal_fidelity >= 1.0 - 1e-10);
}

TEST_CASE("cat_postselect for one ion gives even and odd cats", "[protocol]")
{
    for (double a : {0.7, 1.0, 2.5}) {
        const ProtocolResult r = run_protocol(ProtocolName::cat_postselect, 1, Complex{0.0, a}, kLasers);
        const Branch& up = branch(r, "all_excited");
        const Branch& down = branch(r, "all_ground");
        const double ov = std::exp(-a * a / 2.0);
        CHECK_THAT(up.probability, WithinAbs(0.5 * 0.5 * (2.0 - 2.0 * ov), 1e-9));
        CHECK_THAT(down.probability, WithinAbs(0.5 * 0.5 * (2.0 + 2.0 * ov), 1e-9));
        CHECK(even_weight(*up.state) <= 1e-12);
        CHECK(odd_weight(*down.state) <= 1e-12);
        CHECK(*up.ideal_fidelity >= 1.0 - 1e-10);
        CHECK(*down.ideal_fidelity >= 1.0 - 1e-10);
    }
}

TEST_CASE("entangled_cat structure", "[protocol]")
{
    for (int n : {1, 2, 3, 4, 5}) {
        const ProtocolResult r = run_protocol(ProtocolName::entangled_cat, n, Complex{0.0, 6.0 / n}, kLasers);
        CAPTURE(n);
        CHECK(r.trace.size() == (n % 2 == 0 ? 3u : 2u));
        Eigen::SelfAdjointEigenSolver<CMatrix> es(reduced_spin_density(r.final_state));
        const auto ev = es.eigenvalues();
        CHECK_THAT(ev(n), WithinAbs(0.5, 1e-6));
        CHECK_THAT(ev(n - 1), WithinAbs(0.5, 1e-6));
        if (n > 1) {
            CHECK(std::abs(ev(n - 2)) < 1e-12);
        }
        CHECK(*branch(r, "x_plus").ideal_fidelity >= 1.0 - 1e-8);
        CHECK(*branch(r, "x_minus").ideal_fidelity >= 1.0 - 1e-8);
        CHECK_THAT(branch(r, "x_plus").probability + branch(r, "x_minus").probability, WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("cat_deterministic branch probabilities", "[protocol]")
{
    for (int n : {1, 2, 3, 4}) {
        for (double a : {1.0, 3.0}) {
            const ProtocolResult r = run_protocol(ProtocolName::cat_deterministic, n, Complex{0.0, a}, kLasers);
            CAPTURE(n, a);
            const double ov = std::exp(-n * n * a * a / 2.0);
            const Branch& up = branch(r, "all_excited");
            const Branch& down = branch(r, "all_ground");
            CHECK_THAT(up.probability + down.probability, WithinAbs(1.0, 1e-9));
            CHECK_THAT(up.probability, WithinAbs(0.5 * (1.0 - ov), 1e-9));
            CHECK(even_weight(*up.state) <= 1e-12);
            CHECK(odd_weight(*down.state) <= 1e-12);
            CHECK(*up.ideal_fidelity >= 1.0 - 1e-9);
        }
    }
}

TEST_CASE("post-selection probability scales as 2^-N", "[protocol]")
{
    for (int n = 1; n <= 5; ++n) {
        const double a = 6.0 / n;
        const ProtocolResult r = run_protocol(ProtocolName::cat_postselect, n, Complex{0.0, a}, kLasers);
        const double p = branch(r, "all_excited").probability;
        CHECK_THAT(p * std::pow(2.0, n), WithinAbs(1.0, 0.1));
    }
}

TEST_CASE("carrier mode switches", "[protocol]")
{
    ProtocolOptions on;
    on.carrier = CarrierMode::on;
    const ProtocolResult odd = run_protocol(ProtocolName::cat_postselect, 3, Complex{0.0, 1.0}, kLasers, on);
    CHECK(odd.trace.size() == 3);
    ProtocolOptions off;
    off.carrier = CarrierMode::off;
    const ProtocolResult even = run_protocol(ProtocolName::cat_deterministic, 2, Complex{0.0, 1.0}, kLasers, off);
    CHECK(even.trace.size() == 3);
    CHECK(carrier_engaged(4, CarrierMode::automatic));
    CHECK_FALSE(carrier_engaged(5, CarrierMode::automatic));
}

TEST_CASE("protocol input handling", "[protocol]")
{
    ProtocolOptions small;
    small.n_max = 8;
    CHECK_THROWS_AS(run_protocol(ProtocolName::multi_cat, 3, Complex{0.0, 3.0}, kLasers, small), TruncationError);
    CHECK_THROWS_AS(run_protocol(ProtocolName::multi_cat, 0, Complex{0.0, 1.0}, kLasers), InvalidArgument);
    LaserSettings none{1.0, 0.1, std::nullopt, std::nullopt};
    CHECK_THROWS_AS(run_protocol(ProtocolName::cat_postselect, 1, Complex{0.0, 1.0}, none), InvalidArgument);
    LaserSettings both{1.0, 0.1, 1.0, 0.05};
    CHECK_THROWS_AS(run_protocol(ProtocolName::cat_postselect, 1, Complex{0.0, 1.0}, both), InvalidArgument);
    LaserSettings negative{1.0, 0.1, std::nullopt, -0.05};
    CHECK_THROWS_AS(run_protocol(ProtocolName::cat_postselect, 1, Complex{0.0, 1.0}, negative), InvalidArgument);

    const ProtocolResult off_axis = run_protocol(ProtocolName::multi_cat, 1, Complex{2.0, 0.0}, kLasers);
    CHECK(off_axis.warnings.size() == 1);
    CHECK(std::abs(off_axis.alpha - Complex{0.0, 2.0}) < 1e-15);

    LaserSettings detuned{1.0, 0.3, 1.0, std::nullopt};
    const ProtocolResult warned = run_protocol(ProtocolName::entangled_cat, 1, Complex{0.0, 1.0}, detuned);
    CHECK(warned.warnings.size() == 2);
}

TEST_CASE("explicit durations bypass the solver", "[protocol]")
{
    ProtocolOptions opts;
    opts.resonant_duration = 2.0;
    opts.dispersive_duration = 1.0;
    const ProtocolResult r = run_protocol(ProtocolName::entangled_cat, 1, Complex{0.0, 1.0}, kLasers, opts);
    CHECK(std::get<DispersivePulse>(r.trace[0].pulse).duration == 1.0);
    CHECK(std::get<ResonantPulse>(r.trace[1].pulse).duration == 2.0);
}

TEST_CASE("run_sequence collapses on post-selection", "[protocol]")
{
    const FockSpace f(40);
    const std::vector<PulseSpec> seq{ResonantPulse{1, 1.0, 0.1, 10.0, kPi / 2.0},
                                     PostselectStep{SpinTarget::all_excited}, CarrierPulse{kPi, 0.0}};
    const SequenceResult r = run_sequence(ground_state(2, f), seq);
    REQUIRE(r.branches.size() == 1);
    CHECK(r.survival == r.branches[0].probability);
    CHECK_THAT(outcome_probability(r.final_state, SpinTarget::all_ground), WithinAbs(1.0, 1e-12));
    CHECK(fidelity(postselect(r.final_state, SpinTarget::all_ground).state, *r.branches[0].state) ==
          Catch::Approx(1.0));
    CHECK(r.trace.size() == 3);
}

TEST_CASE("textbook states", "[protocol]")
{
    const FockSpace f(40);
    CHECK(odd_weight(cat_state(Complex{0.0, 2.0}, +1, f)) < 1e-30);
    CHECK(even_weight(cat_state(Complex{0.0, 2.0}, -1, f)) < 1e-30);
    CHECK_THAT(line_cat_coefficient(3, 3), WithinRel(1.0 / 6.0, 1e-15));
    CHECK_THAT(line_cat_coefficient(3, 2), WithinRel(-0.5, 1e-15));
    CHECK_THAT(line_cat_coefficient(3, 2, SpinTarget::all_ground), WithinRel(0.5, 1e-15));
    CHECK(auto_cutoff(3, 3.0) == 58);
}

TEST_CASE("sampler is seeded and complete", "[protocol]")
{
    const std::vector<Branch> b{{"a", "z", 0.25, {}, {}}, {"b", "z", 0.5, {}, {}}};
    const auto c1 = sample_outcomes(b, 10000, 42);
    const auto c2 = sample_outcomes(b, 10000, 42);
    CHECK(c1 == c2);
    CHECK(c1.at("a") + c1.at("b") + c1.at("other") == 10000);
    CHECK(std::abs(c1.at("b") - 5000) < 250);
    CHECK(sample_outcomes(b, 10000, 43) != c1);
    CHECK_THROWS_AS(sample_outcomes(b, -1, 1), InvalidArgument);
}
