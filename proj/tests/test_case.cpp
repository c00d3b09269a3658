#include <doctest.h>

#include "fixtures.hpp"
#include "mmg/case.hpp"
#include "mmg/errors.hpp"

using namespace mmg;

TEST_CASE("toy case validates and exposes accessors")
{
    NetworkCase c = mmgtest::toy_four_grid();
    c.validate();
    CHECK(c.microgrid_ids() == std::vector<int>{1, 2, 3, 4});
    CHECK(c.microgrid(3).id == 3);
    CHECK(c.linking_line("l5").from_mg == 2);
    CHECK(c.total_p_load() == doctest::Approx(1.0));
    CHECK(c.microgrid(1).bus("b1_2").v_max == doctest::Approx(1.05));
    CHECK_THROWS_AS(c.microgrid(9), ValidationError);
    CHECK_THROWS_AS(c.linking_line("nope"), ValidationError);
}

TEST_CASE("serialize / parse round trip preserves the case")
{
    NetworkCase c = mmgtest::toy_four_grid();
    c.frequency_limits.big_m_ss = 7.5;
    c.linking_lines[0].big_m_p = 3.0;
    const std::string text = serialize_case(c);
    NetworkCase d = parse_case(text);

    CHECK(d.name == c.name);
    CHECK(d.bases.s_base_kw == doctest::Approx(c.bases.s_base_kw));
    CHECK(d.severity == doctest::Approx(c.severity));
    REQUIRE(d.microgrids.size() == 4);
    CHECK(d.microgrid(2).dynamics.t_lead == doctest::Approx(0.008));
    CHECK(d.microgrid(2).loads[0].zip_p.p == doctest::Approx(0.7));
    CHECK(d.microgrid(2).ders[0].ramp_up == doctest::Approx(0.2));
    CHECK(d.frequency_limits.ss_min == doctest::Approx(-0.002));
    REQUIRE(d.frequency_limits.big_m_ss.has_value());
    CHECK(*d.frequency_limits.big_m_ss == doctest::Approx(7.5));
    REQUIRE(d.linking_line("l1").big_m_p.has_value());
    CHECK(*d.linking_line("l1").big_m_p == doctest::Approx(3.0));
    CHECK_FALSE(d.linking_line("l2").big_m_p.has_value());

    // second trip must be byte-identical
    CHECK(serialize_case(d) == text);
}

TEST_CASE("frequency limits are converted from Hz to per unit")
{
    NetworkCase c = mmgtest::toy_four_grid();
    const std::string text = serialize_case(c);
    NetworkCase d = parse_case(text);
    // -0.01 pu at 50 Hz nominal is -0.5 Hz in the file
    CHECK(text.find("-0.5") != std::string::npos);
    CHECK(d.frequency_limits.nadir_min == doctest::Approx(-0.01));
}

TEST_CASE("severity rescaling scales the disturbance split proportionally")
{
    NetworkCase c = mmgtest::toy_four_grid();
    c.rescale_severity(0.8);
    c.validate();
    CHECK(c.severity == doctest::Approx(0.8));
    CHECK(c.microgrid(1).delta_p0 == doctest::Approx(0.2));
    CHECK(c.microgrid(1).delta_q0 == doctest::Approx(0.04));
}

TEST_CASE("validation rejects malformed cases")
{
    auto broken = [](auto mutate) {
        NetworkCase c = mmgtest::toy_four_grid();
        mutate(c);
        return c;
    };

    CHECK_THROWS_AS(broken([](NetworkCase &c) { c.bases.s_base_kw = 0; }).validate(), ValidationError);
    CHECK_THROWS_AS(broken([](NetworkCase &c) { c.microgrids[0].buses[1].v_min = 0.0; }).validate(),
                    ValidationError);
    CHECK_THROWS_AS(broken([](NetworkCase &c) { c.microgrids[0].buses[1].is_boundary = true; }).validate(),
                    ValidationError);
    CHECK_THROWS_AS(broken([](NetworkCase &c) { c.microgrids[0].lines.clear(); }).validate(),
                    ValidationError);
    CHECK_THROWS_AS(broken([](NetworkCase &c) { c.microgrids[0].ders[0].p_initial = 9.0; }).validate(),
                    ValidationError);
    CHECK_THROWS_AS(broken([](NetworkCase &c) { c.microgrids[0].loads[0].zip_p.z = 0.4; }).validate(),
                    ValidationError);
    CHECK_THROWS_AS(broken([](NetworkCase &c) { c.microgrids[0].loads[0].zip_q = {-0.1, 0.4, 0.7}; }).validate(),
                    ValidationError);
    CHECK_THROWS_AS(broken([](NetworkCase &c) { c.microgrids[0].dynamics.t_lag = 0.2; }).validate(),
                    ValidationError);
    CHECK_THROWS_AS(broken([](NetworkCase &c) { c.microgrids[0].delta_p0 = 0.5; }).validate(),
                    ValidationError);
    CHECK_THROWS_AS(broken([](NetworkCase &c) { c.linking_lines[1].id = "l1"; }).validate(),
                    ValidationError);
    CHECK_THROWS_AS(broken([](NetworkCase &c) { c.linking_lines[0].to_mg = 1; }).validate(),
                    ValidationError);
    CHECK_THROWS_AS(broken([](NetworkCase &c) { c.frequency_limits.ss_min = 0.001; }).validate(),
                    ValidationError);
}

TEST_CASE("parse errors carry context")
{
    CHECK_THROWS_AS(parse_case("{not json"), ParseError);
    CHECK_THROWS_AS(parse_case("{}"), ParseError);
    CHECK_THROWS_AS(load_case("/no/such/file.json"), ParseError);
}
