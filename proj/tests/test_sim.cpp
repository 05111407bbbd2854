#include "swdae/sim.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace swdae;
namespace st = swdae::testing;

namespace {

JumpOdeSystem desk()
{
    return build_jump_ode(make_switched_dae(st::desk_modes()));
}

SwitchingSignal single(std::size_t mode, double t0, double t_end)
{
    SwitchingSignal q;
    q.t0 = t0;
    q.t_end = t_end;
    q.entries = {{t0, mode}};
    return q;
}

InputSignal scalar(std::vector<double> coeffs, double rate = 0.0)
{
    InputPiece piece;
    piece.channels = {{InputTerm{std::move(coeffs), rate}}};
    return InputSignal({piece});
}

}  // namespace

TEST_CASE("DESK run with unit input")
{
    const Trajectory traj = simulate(desk(), st::desk_signal(), InputSignal::constant(Vector::Ones(1)), {0.05});
    REQUIRE(traj.switches.size() == 1);
    const SwitchRecord& sw = traj.switches.front();
    CHECK(sw.t == 1.0);
    CHECK(std::abs(sw.z_minus(0) - (1.0 - std::exp(-1.0))) <= 1e-12);
    CHECK(std::abs(sw.z_minus(1)) <= 1e-15);
    CHECK(sw.z_plus.norm() == 0.0);

    REQUIRE(traj.impulses.size() == 1);
    const ImpulseRecord& imp = traj.impulses.front();
    REQUIRE(imp.coefficients.size() == 1);
    CHECK(imp.coefficients[0].norm() <= 1e-15);
    CHECK(imp.numerically_zero[0]);

    CHECK(traj.samples.front().t == 0.0);
    CHECK(traj.samples.back().t == 2.0);
    for (std::size_t i = 1; i < traj.samples.size(); ++i)
        CHECK(traj.samples[i].t > traj.samples[i - 1].t);
    // Mode 2 output with u = 1 is -u' = 0.
    CHECK(traj.samples.back().y.norm() <= 1e-15);
}

TEST_CASE("DESK mode 2 feedthrough reproduces -u'")
{
    const Trajectory ramp = simulate(desk(), single(1, 0.0, 2.0), scalar({0.0, 1.0}), {0.1});
    for (const Sample& s : ramp.samples)
        CHECK(s.y(0) == doctest::Approx(-1.0).epsilon(1e-14));

    const Trajectory ex = simulate(desk(), single(1, 0.0, 1.0), scalar({1.0}, 2.0), {0.1});
    for (const Sample& s : ex.samples)
        CHECK(s.y(0) == doctest::Approx(-2.0 * std::exp(2.0 * s.t)).epsilon(1e-13));
}

TEST_CASE("algebraic feedthrough matches the hand-decoupled DAE")
{
    // x1' = -x1 + u, 0 = x2 + u, y = x1 + x2 with u = e^{-2t}:
    // x1 = e^{-t} - e^{-2t}, y = e^{-t} - 2 e^{-2t}.
    ModeSystem mode = st::desk_modes()[0];
    mode.C = Matrix{{1, 1}};
    const JumpOdeSystem jos = build_jump_ode(make_switched_dae({mode}));
    const Trajectory traj = simulate(jos, single(0, 0.0, 3.0), scalar({1.0}, -2.0), {0.05});
    for (const Sample& s : traj.samples)
        CHECK(std::abs(s.y(0) - (std::exp(-s.t) - 2.0 * std::exp(-2.0 * s.t))) <= 1e-12);
}

TEST_CASE("restarting mid-interval reproduces the run")
{
    st::Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const SwitchedDAE sys = st::random_model(rng, 5, 1);
        const JumpOdeSystem jos = build_jump_ode(sys);
        const SwitchingSignal whole = single(0, 0.0, 2.0);
        const InputSignal u = st::random_input(rng, sys.m, whole, 3);

        const Trajectory full = simulate(jos, whole, u, {0.1});
        const Trajectory first = simulate(jos, single(0, 0.0, 1.0), u, {0.1});
        SimOptions restart{0.1};
        restart.initial_state = first.samples.back().z;
        const Trajectory second = simulate(jos, single(0, 1.0, 2.0), u, restart);
        CHECK(relative_error(second.samples.back().z, full.samples.back().z) <= 1e-9);
    }
}

TEST_CASE("switch records satisfy the jump rule")
{
    st::Rng rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const SwitchedDAE sys = st::random_model(rng, 5, 3);
        const JumpOdeSystem jos = build_jump_ode(sys);
        const SwitchingSignal q = st::random_signal(rng, sys.mode_count(), 3);
        const Trajectory traj = simulate(jos, q, st::random_input(rng, sys.m, q, 3), {0.1});
        CHECK(traj.switches.size() == q.switch_count());
        for (const SwitchRecord& rec : traj.switches) {
            const DecoupledMode& cur = jos.mode(rec.to);
            const DecoupledMode& prev = jos.mode(rec.from);
            const Vector expected = cur.Pi * rec.z_minus + cur.Pi * prev.JumpB * rec.u_minus;
            CHECK((rec.z_plus - expected).norm() <= 1e-10 * std::max(1.0, expected.norm()));
        }
        for (const ImpulseRecord& imp : traj.impulses)
            CHECK(static_cast<int>(imp.coefficients.size()) == jos.mode(q.mode(imp.k)).nu - 1);
    }
}

TEST_CASE("impulsive-input formulation gives the same states")
{
    st::Rng rng(41);
    for (int trial = 0; trial < 15; ++trial) {
        const SwitchedDAE sys = st::random_model(rng, 5, 3);
        const JumpOdeSystem jos = build_jump_ode(sys);
        const SwitchingSignal q = st::random_signal(rng, sys.mode_count(), 3);
        const InputSignal u = st::random_input(rng, sys.m, q, 3);
        const Trajectory a = simulate(jos, q, u, {0.1});
        const Trajectory b = simulate_impulsive(jos, q, u, {0.1});
        REQUIRE(a.samples.size() == b.samples.size());
        for (std::size_t i = 0; i < a.samples.size(); ++i) {
            CHECK(a.samples[i].t == b.samples[i].t);
            CHECK(relative_error(b.samples[i].z, a.samples[i].z) <= 1e-8);
        }
        CHECK(b.impulses.empty());
    }
}

TEST_CASE("zero input from rest stays at rest")
{
    const JumpOdeSystem jos = desk();
    const Trajectory a = simulate(jos, st::desk_signal(), InputSignal::zero(1), {0.1});
    const Trajectory b = simulate_impulsive(jos, st::desk_signal(), InputSignal::zero(1), {0.1});
    for (const auto* traj : {&a, &b})
        for (const Sample& s : traj->samples)
            CHECK(s.z.norm() == 0.0);
}

TEST_CASE("horizon and order checks")
{
    const JumpOdeSystem jos = desk();
    InputPiece piece;
    piece.channels = {{InputTerm{{1.0}, 0.0}}};
    const InputSignal short_input({piece}, InputSignal::kUnlimitedOrder, 1.5);
    try {
        simulate(jos, st::desk_signal(), short_input);
        FAIL("expected OutOfHorizon");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::OutOfHorizon);
    }

    const InputSignal no_derivatives({piece}, 0);
    try {
        simulate(jos, st::desk_signal(), no_derivatives);
        FAIL("expected InvalidArgument");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::InvalidArgument);
    }

    SwitchingSignal bad = st::desk_signal();
    bad.t_end = 0.5;
    CHECK_THROWS_AS(simulate(jos, bad, InputSignal::constant(Vector::Ones(1))), Error);
    CHECK_THROWS_AS(simulate(jos, st::desk_signal(), InputSignal::constant(Vector::Ones(1)), {0.0}), Error);
}

TEST_CASE("input breakpoints inside an interval become grid points")
{
    // Scalar x' = -x + u with u = 1 on [0, 0.5), 0 afterwards.
    ModeSystem mode{Matrix::Identity(1, 1), -Matrix::Identity(1, 1), Matrix::Identity(1, 1), Matrix::Identity(1, 1)};
    const JumpOdeSystem jos = build_jump_ode(make_switched_dae({mode}));
    InputPiece on;
    on.channels = {{InputTerm{{1.0}, 0.0}}};
    InputPiece off;
    off.start = 0.5;
    off.channels = {{}};
    const Trajectory traj = simulate(jos, single(0, 0.0, 1.0), InputSignal({on, off}), {0.3});
    const double expected = (1.0 - std::exp(-0.5)) * std::exp(-0.5);
    CHECK(traj.samples.back().z(0) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("trajectory and impulse CSV")
{
    const Trajectory traj = simulate(desk(), st::desk_signal(), InputSignal::constant(Vector::Ones(1)), {0.5});
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    const std::string csv = os.str();
    CHECK(csv.rfind("t,z_1,z_2,y_1\n", 0) == 0);
    CHECK(csv.find("\n0.5,0.393469340287") != std::string::npos);
    CHECK(csv.find('\r') == std::string::npos);

    std::ostringstream imp;
    write_impulses_csv(imp, traj);
    CHECK(imp.str() == "t,k,order,c_1,numerically_zero\n1,1,1,0,1\n");
}
