#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "mmg/errors.hpp"
#include "mmg/sfr.hpp"

using namespace mmg;

namespace
{

const VscDynamics kUnit{0.9, 0.08, 0.008, 0.1};

} // namespace

TEST_CASE("aggregation of identical units")
{
    SfrAggregate a = aggregate_dynamics({kUnit, kUnit, kUnit, kUnit}, 1.0);
    CHECK(a.inertia == doctest::Approx(3.6));
    CHECK(a.inv_droop == doctest::Approx(50.0));
    CHECK(a.lead_gain == doctest::Approx(0.4));
    CHECK(a.t_lag == doctest::Approx(0.1));

    CHECK_THROWS_AS(aggregate_dynamics({}, 1.0), ValidationError);
    VscDynamics other = kUnit;
    other.t_lag = 0.2;
    CHECK_THROWS_AS(aggregate_dynamics({kUnit, other}, 1.0), ValidationError);
}

TEST_CASE("closed-form response coefficients, hand-checked reference values")
{
    // Four identical units, H=0.9 s, R=0.08, T_lead=8 ms, T_lag=0.1 s, D=1.
    SfrAggregate a = aggregate_dynamics({kUnit, kUnit, kUnit, kUnit}, 1.0);
    SfrShape s = response_shape(a);
    CHECK(s.omega_n == doctest::Approx(8.41625).epsilon(1e-4));
    CHECK(s.zeta == doctest::Approx(0.63534).epsilon(1e-4));
    CHECK(s.underdamped());
    CHECK(s.t_peak == doctest::Approx(0.33727).epsilon(1e-3));
    CHECK(s.beta == doctest::Approx(1.0 / 51.0));
    CHECK(s.alpha == doctest::Approx(0.022190).epsilon(1e-3));
}

TEST_CASE("single-unit coefficients")
{
    SfrAggregate a = aggregate_dynamics({kUnit}, 1.0);
    SfrShape s = response_shape(a);
    CHECK(s.beta == doctest::Approx(1.0 / 13.5));
    CHECK(s.alpha > s.beta);  // underdamped overshoot
}

TEST_CASE("aggregate via case subset matches direct aggregation")
{
    const NetworkCase c = mmgtest::toy_four_grid();
    SfrAggregate a = aggregate_for(c, {1, 2});
    CHECK(a.inertia == doctest::Approx(1.8));
    CHECK(a.inv_droop == doctest::Approx(25.0));
    CHECK(a.damping == doctest::Approx(1.0));
}

TEST_CASE("simulation matches the closed form for a step loss")
{
    SfrAggregate a = aggregate_dynamics({kUnit, kUnit, kUnit, kUnit}, 1.0);
    SfrShape s = response_shape(a);
    const double dp = -0.5;  // 0.5 pu generation deficit
    SfrTrajectory tr = simulate_step(a, dp, 5.0, 1e-4);

    CHECK(tr.extreme() == doctest::Approx(s.alpha * dp).epsilon(1e-6));
    CHECK(tr.extreme_time() == doctest::Approx(s.t_peak).epsilon(1e-3));
    CHECK(tr.final_omega() == doctest::Approx(s.beta * dp).epsilon(1e-6));
}

TEST_CASE("closed form agrees with simulation across random parameters")
{
    std::mt19937 rng(20260826);
    std::uniform_real_distribution<double> uh(0.3, 5.0), ur(0.03, 0.3), utl(0.001, 0.02),
        ut(0.05, 0.3), ud(0.0, 2.0), un(1, 4);

    for (int trial = 0; trial < 60; ++trial)
    {
        const int n = 1 + rng() % 4;
        const double t_lag = ut(rng);
        std::vector<VscDynamics> units;
        for (int i = 0; i < n; ++i)
            units.push_back({uh(rng), ur(rng), utl(rng), t_lag});
        SfrAggregate a = aggregate_dynamics(units, ud(rng));
        SfrShape s = response_shape(a);

        const double dp = -0.3;
        // horizon scales with the slowest mode so overdamped systems settle
        const double slow = s.underdamped()
                                ? s.zeta * s.omega_n
                                : s.omega_n * (s.zeta - std::sqrt(s.zeta * s.zeta - 1.0));
        const double t_end = 40.0 / slow;
        const double dt = std::clamp(t_end / 4e5, 2e-5, 1e-3);
        SfrTrajectory tr = simulate_step(a, dp, t_end, dt);
        const double nadir = tr.extreme();
        CAPTURE(trial);
        CAPTURE(s.zeta);
        if (s.underdamped())
        {
            CHECK(std::abs(nadir - s.alpha * dp) <= 1e-5);
            CHECK(std::abs(tr.extreme_time() - s.t_peak) <= 1e-3);
        }
        else
        {
            // no overshoot: the extreme approaches steady state from above
            CHECK(std::abs(nadir) <= std::abs(s.alpha * dp) + 1e-7);
        }
        CHECK(tr.final_omega() == doctest::Approx(s.beta * dp).epsilon(1e-4));
    }
}
