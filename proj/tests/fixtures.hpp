#pragma once

#include <string>

#include "mmg/case.hpp"

namespace mmgtest
{

// Four identical microgrids connected in the ring-with-chords layout used by
// the bundled network: l1=(1,2) l2=(2,3) l3=(3,4) l4=(1,3) l5=(2,4).
// Each microgrid is a tiny 2-bus feeder with one DER and one load, sized so
// the case validates; electrical details are not meant to be realistic.
inline mmg::NetworkCase toy_four_grid()
{
    mmg::NetworkCase c;
    c.name = "toy4";
    c.bases = {5000.0, 12.66, 50.0};
    c.damping = 1.0;
    c.severity = 0.4;
    c.frequency_limits = {-0.01, 0.01, -0.002, 0.002, {}, {}};

    for (int id = 1; id <= 4; ++id)
    {
        mmg::Microgrid m;
        m.id = id;
        m.dynamics = {0.9, 0.08, 0.008, 0.1};
        m.delta_p0 = 0.1;
        m.delta_q0 = 0.02;
        const std::string p = "b" + std::to_string(id);
        m.boundary_bus = p + "_1";
        m.buses.push_back({p + "_1", id, 0.95, 1.05, true});
        m.buses.push_back({p + "_2", id, 0.95, 1.05, false});
        m.lines.push_back({p + "_1", p + "_2", 8.0, -4.0, 0.5});
        m.ders.push_back({"g" + std::to_string(id), p + "_1", 0.02, 0.4, -0.3, 0.3, 0.2, 0.2, 0.2});
        m.loads.push_back({p + "_2", 0.25, 0.08, {0.2, 0.1, 0.7}, {0.2, 0.1, 0.7}, 3.0});
        c.microgrids.push_back(std::move(m));
    }

    auto link = [](std::string id, int a, int b) {
        mmg::LinkingLine l;
        l.id = std::move(id);
        l.from_mg = a;
        l.to_mg = b;
        l.g = 10.0;
        l.b = -5.0;
        l.p_flow_max = 1.0;
        l.q_flow_max = 1.0;
        l.p_loss_max = 0.5;
        return l;
    };
    c.linking_lines = {link("l1", 1, 2), link("l2", 2, 3), link("l3", 3, 4),
                       link("l4", 1, 3), link("l5", 2, 4)};
    return c;
}

} // namespace mmgtest
