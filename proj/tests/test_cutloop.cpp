#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mmg/cutloop.hpp"
#include "mmg/graph.hpp"
#include "mmg/sfr.hpp"

using namespace mmg;

namespace
{

// All switches closed, every load fully served at nominal demand.
Solution served_solution(const NetworkCase &c, const ModelInstance &md)
{
    Solution s;
    s.values.assign(md.vars.size(), 0.0);
    for (const Microgrid &m : c.microgrids)
        for (const Load &l : m.loads)
        {
            s.values[md.var(vn::p_load(m.id, l.bus))] = l.p_bar;
            s.values[md.var(vn::rho(m.id, l.bus))] = l.p_bar;
            s.values[md.var(vn::x(m.id, l.bus))] = 1.0;
        }
    for (const LinkingLine &l : c.linking_lines)
    {
        s.topology.on_edges.insert(l.id);
        s.values[md.var(vn::z(l.id))] = 1.0;
    }
    return s;
}

NetworkCase two_grid(double p_bar, double voll = 2.0)
{
    NetworkCase c = mmgtest::toy_four_grid();
    c.microgrids.resize(2);
    c.linking_lines = {c.linking_lines[0]};  // l1 = (1,2)
    for (Microgrid &m : c.microgrids)
    {
        m.delta_p0 = 0.15;
        Load &l = m.loads[0];
        l.p_bar = p_bar;
        l.q_bar = 0.3 * p_bar;
        l.zip_p = {0.0, 0.0, 1.0};  // constant power: shed amount is exact
        l.zip_q = {0.0, 0.0, 1.0};
        l.voll = voll;
    }
    c.severity = 0.3;
    return c;
}

} // namespace

TEST_CASE("separation on hand-built solutions")
{
    NetworkCase c = mmgtest::toy_four_grid();

    SUBCASE("zero severity produces no cuts")
    {
        for (Microgrid &m : c.microgrids)
            m.delta_p0 = 0.0;
        c.severity = 0.0;
        const ModelInstance md = build_base_model(c);
        CHECK(separate(c, md, served_solution(c, md)).empty());
    }
    SUBCASE("0.64 pu unserved deficit trips both lower bounds")
    {
        for (Microgrid &m : c.microgrids)
            m.delta_p0 = 0.16;
        c.severity = 0.64;
        const ModelInstance md = build_base_model(c);
        const auto cuts = separate(c, md, served_solution(c, md));
        REQUIRE(cuts.size() == 2);
        CHECK(cuts[0].kind == CutKind::nadir_min);
        CHECK(cuts[1].kind == CutKind::ss_min);
        // beta = 1/51 for the four-unit aggregate with D = 1
        CHECK(cuts[1].metric == doctest::Approx(-0.64 / 51.0).epsilon(1e-12));
        CHECK(cuts[1].beta == doctest::Approx(1.0 / 51.0).epsilon(1e-12));
        CHECK(cuts[0].metric == doctest::Approx(cuts[0].alpha * -0.64).epsilon(1e-12));
        CHECK(cuts[0].component == std::set<int>{1, 2, 3, 4});
    }
    SUBCASE("0.095 pu residual deficit is inside both bands")
    {
        for (Microgrid &m : c.microgrids)
            m.delta_p0 = 0.095 / 4.0;
        c.severity = 0.095;
        const ModelInstance md = build_base_model(c);
        CHECK(separate(c, md, served_solution(c, md)).empty());
        // beta * 0.095 = 0.0018627... sits just inside the 0.002 pu band
        CHECK(0.095 / 51.0 < 0.002);
    }
    SUBCASE("islanded topology screens components independently")
    {
        const ModelInstance md = build_base_model(c);
        Solution s = served_solution(c, md);
        s.topology.on_edges = {"l1"};  // islands {1,2} and {3},{4}
        const auto cuts = separate(c, md, s);
        // every island has an unserved 0.1 pu per microgrid deficit:
        // {1,2}: beta=1/26 -> ss -0.00769; {3},{4}: beta=1/13.5 -> ss -0.0074
        REQUIRE(cuts.size() == 3);
        for (const CutRecord &r : cuts)
            CHECK(r.kind == CutKind::ss_min);
        CHECK(cuts[0].component == std::set<int>{1, 2});
        CHECK(cuts[1].component == std::set<int>{3});
        CHECK(cuts[2].component == std::set<int>{4});
    }
}

TEST_CASE("island mismatch accounting")
{
    const NetworkCase c = mmgtest::toy_four_grid();
    const ModelInstance md = build_base_model(c);
    Solution s = served_solution(c, md);
    // shed microgrid 2's load entirely
    s.values[md.var(vn::rho(2, "b2_2"))] = 0.0;
    CHECK(island_mismatch(c, md, {1, 2, 3, 4}, s.values) ==
          doctest::Approx(-0.4 + 0.25).epsilon(1e-12));
    CHECK(island_mismatch(c, md, {1}, s.values) == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(island_mismatch(c, md, {2}, s.values) == doctest::Approx(-0.1 + 0.25).epsilon(1e-12));
}

TEST_CASE("cut loop on the zero-severity toy terminates immediately")
{
    NetworkCase c = mmgtest::toy_four_grid();
    for (Microgrid &m : c.microgrids)
        m.delta_p0 = 0.0;
    c.severity = 0.0;
    const CutLoopResult r = run_cut_loop(c);
    CHECK(r.trace.size() == 1);
    CHECK(r.trace[0].k == 0);
    CHECK(r.cuts.empty());
    CHECK(r.solution.curtailment_pu == doctest::Approx(0.0));
    CHECK(verify(c, r.model, r.solution).ok);
}

TEST_CASE("two-microgrid loop sheds the analytic minimum")
{
    // staying connected needs shed >= 0.3 - 0.002 * 26 = 0.248 pu; with one
    // 0.26 pu constant-power load per microgrid the cheapest integral answer
    // is a single shed load, and splitting forces both loads off
    const NetworkCase c = two_grid(0.26);
    const CutLoopResult r = run_cut_loop(c);
    CHECK(r.solution.curtailment_pu == doctest::Approx(0.26).epsilon(1e-6));
    CHECK(r.mip.objective == doctest::Approx(2.0 * 0.26).epsilon(1e-6));
    CHECK(connected_components(c, r.solution.topology).size() == 1);
    const VerifyReport vr = verify(c, r.model, r.solution);
    CHECK(vr.ok);
    REQUIRE(vr.components.size() == 1);
    CHECK(vr.components[0].steady_pu == doctest::Approx(-0.04 / 26.0).epsilon(1e-4));
}

TEST_CASE("four-microgrid loop converges with a monotone objective")
{
    const NetworkCase c = mmgtest::toy_four_grid();
    const CutLoopResult r = run_cut_loop(c);
    // every island of n microgrids must shed at least 0.075 n - 0.002 pu, so
    // two 0.25 pu loads is the cheapest integral strategy on any topology
    CHECK(r.mip.objective == doctest::Approx(2.0 * 3.0 * 0.25).epsilon(1e-6));
    int off = 0;
    for (const auto &[key, on] : r.solution.load_status)
        off += 1 - on;
    CHECK(off == 2);
    for (std::size_t i = 1; i < r.trace.size(); ++i)
    {
        CHECK(r.trace[i].psi >= r.trace[i - 1].psi - 1e-7);
        CHECK(r.trace[i].pool_size > r.trace[i - 1].pool_size);
    }
    CHECK(r.cuts.size() == r.model.cut_pool.size());
    CHECK(separate(c, r.model, r.solution).empty());
    CHECK(verify(c, r.model, r.solution).ok);
    const std::string csv = trace_csv(r.trace);
    CHECK(csv.rfind("k,psi,cut_pool,curtailment_pu,curtailment_kw,edges,seconds\n", 0) == 0);
}

TEST_CASE("verify flags an unshed overload")
{
    const NetworkCase c = mmgtest::toy_four_grid();
    const ModelInstance md = build_base_model(c);
    const Solution s = served_solution(c, md);
    const VerifyReport vr = verify(c, md, s);
    CHECK_FALSE(vr.ok);
    REQUIRE(vr.components.size() == 1);
    CHECK_FALSE(vr.components[0].frequency_ok);
    // time-domain steady state matches the closed form beta * mismatch
    CHECK(vr.components[0].steady_pu == doctest::Approx(-0.4 / 51.0).epsilon(1e-3));
    CHECK(vr.text(c).find("VIOLATION") != std::string::npos);
}
