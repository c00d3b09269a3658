#include <doctest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "mmg/errors.hpp"
#include "mmg/sfr.hpp"
#include "mmg/ufls.hpp"

using namespace mmg;

namespace
{

NetworkCase single(double deficit)
{
    NetworkCase c = mmgtest::toy_four_grid();
    c.microgrids.resize(1);
    c.linking_lines.clear();
    c.microgrids[0].delta_p0 = deficit;
    c.severity = deficit;
    return c;
}

} // namespace

TEST_CASE("stage table validation")
{
    const NetworkCase c = single(0.1);
    CHECK_THROWS_AS(simulate_ufls(c, {{0.5, 0.1, 0.1}, {0.3, 0.1, 0.1}}), ValidationError);
    CHECK_THROWS_AS(simulate_ufls(c, {{0.3, 0.0, 0.1}}), ValidationError);
    CHECK_THROWS_AS(simulate_ufls(c, {{0.3, 1.5, 0.1}}), ValidationError);
    CHECK_THROWS_AS(simulate_ufls(c, {{0.3, 0.5, -0.1}}), ValidationError);
}

TEST_CASE("zero deficit sheds nothing")
{
    const UflsOutcome o = simulate_ufls(single(0.0), default_relay_stages());
    CHECK(o.events.empty());
    CHECK(o.total_shed_kw == 0.0);
    CHECK(o.per_mg[0].nadir_hz == 0.0);
    CHECK(o.per_mg[0].within_limits);
}

TEST_CASE("sub-threshold deficit rides through at the closed-form offset")
{
    // single unit: beta = 1/13.5, alpha ~ 0.084; deficit 0.05 pu keeps the
    // dip above the 0.3 Hz first stage
    const NetworkCase c = single(0.05);
    const UflsOutcome o = simulate_ufls(c, default_relay_stages());
    CHECK(o.events.empty());
    CHECK(o.total_shed_kw == 0.0);
    CHECK(o.per_mg[0].steady_hz == doctest::Approx(-0.05 / 13.5 * 50.0).epsilon(1e-4));
    CHECK_FALSE(o.per_mg[0].within_limits);  // outside the 0.1 Hz band, no relay help
}

TEST_CASE("with no stages the trajectory matches the step simulation")
{
    const NetworkCase c = single(0.12);
    const double t_end = 10.0, dt = 5e-4;
    const UflsOutcome o = simulate_ufls(c, {}, 0.0, t_end, dt);
    const SfrAggregate agg = aggregate_dynamics({c.microgrids[0].dynamics}, c.damping);
    const SfrTrajectory tr = simulate_step(agg, -0.12, t_end, dt);
    CHECK(o.per_mg[0].steady_hz == tr.final_omega() * 50.0);
    double raw_extreme = 0.0;
    for (double w : tr.omega)
        if (std::abs(w) > std::abs(raw_extreme))
            raw_extreme = w;
    CHECK(o.per_mg[0].nadir_hz == raw_extreme * 50.0);
}

TEST_CASE("staged shedding matches an independent event walk-through")
{
    const NetworkCase c = single(0.16);
    const std::vector<RelayStage> stages = default_relay_stages();
    const UflsOutcome o = simulate_ufls(c, stages);
    REQUIRE(!o.events.empty());

    // independent coarse Euler re-simulation of the relay logic
    const SfrAggregate agg = aggregate_dynamics({c.microgrids[0].dynamics}, c.damping);
    const double kT = agg.lead_gain / agg.t_lag, dt = 1e-4;
    double w = 0.0, z = 0.0, dp = -0.16;
    std::vector<double> held(stages.size(), 0.0);
    std::vector<double> trip_time(stages.size(), -1.0);
    for (long i = 0; i < 300000; ++i)
    {
        const double dw = (dp - agg.damping * w - kT * w - z) / (2.0 * agg.inertia);
        const double dz = (-z + (agg.inv_droop - kT) * w) / agg.t_lag;
        w += dt * dw;
        z += dt * dz;
        for (std::size_t s = 0; s < stages.size(); ++s)
        {
            if (trip_time[s] >= 0.0)
                continue;
            held[s] = (w * 50.0 <= -stages[s].threshold_hz) ? held[s] + dt : 0.0;
            if (held[s] >= stages[s].delay_s)
            {
                trip_time[s] = (i + 1) * dt;
                dp += stages[s].fraction * 0.25;
            }
        }
    }
    for (const ShedEvent &e : o.events)
    {
        REQUIRE(trip_time[e.stage] >= 0.0);
        CHECK(e.time_s == doctest::Approx(trip_time[e.stage]).epsilon(0.05));
        CHECK(e.shed_kw == doctest::Approx(0.1 * 0.25 * 5000.0));
    }
    int tripped = 0;
    for (double t : trip_time)
        tripped += t >= 0.0 ? 1 : 0;
    CHECK(static_cast<int>(o.events.size()) == tripped);
}

TEST_CASE("total shed is nondecreasing in the deficit")
{
    double prev = -1.0;
    for (double deficit = 0.0; deficit <= 0.25; deficit += 0.025)
    {
        const UflsOutcome o = simulate_ufls(single(deficit), default_relay_stages());
        CHECK(o.total_shed_kw >= prev);
        prev = o.total_shed_kw;
    }
}

TEST_CASE("shed never exceeds the microgrid load")
{
    // fractions sum past 1: the last block is clipped at the remaining load
    const std::vector<RelayStage> deep = {
        {0.05, 0.4, 0.05}, {0.10, 0.4, 0.05}, {0.15, 0.4, 0.05}};
    const UflsOutcome o = simulate_ufls(single(0.30), deep);
    CHECK(o.per_mg[0].shed_kw <= 0.25 * 5000.0 + 1e-9);
    CHECK(o.per_mg[0].shed_kw == doctest::Approx(0.25 * 5000.0));
}

TEST_CASE("comparison table is a valid, deeper schedule than the default")
{
    const std::vector<RelayStage> deep = comparison_relay_stages();
    const std::vector<RelayStage> base = default_relay_stages();
    double prev = 0.0, deep_total = 0.0, base_total = 0.0;
    for (const RelayStage &s : deep)
    {
        CHECK(s.threshold_hz > prev);
        CHECK(s.fraction > 0.0);
        CHECK(s.fraction <= 1.0);
        CHECK(s.delay_s >= 0.0);
        prev = s.threshold_hz;
        deep_total += s.fraction;
    }
    for (const RelayStage &s : base)
        base_total += s.fraction;
    CHECK(deep_total > base_total);
    CHECK(deep.front().threshold_hz < base.front().threshold_hz);

    // deeper pickup and larger blocks shed at least as much on the same event
    const UflsOutcome a = simulate_ufls(single(0.16), deep);
    const UflsOutcome b = simulate_ufls(single(0.16), base);
    CHECK(a.total_shed_kw >= b.total_shed_kw);
}
