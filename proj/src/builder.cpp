#include "mmg/builder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mmg/errors.hpp"
#include "mmg/graph.hpp"
#include "mmg/sfr.hpp"

namespace mmg
{

namespace vn
{

namespace
{
std::string tag(const char *p, int m, const std::string &s)
{
    return std::string(p) + "[" + std::to_string(m) + ":" + s + "]";
}
std::string tag(const char *p, int m, std::size_t l, int dir = -1)
{
    std::string out = std::string(p) + "[" + std::to_string(m) + ":" + std::to_string(l);
    if (dir >= 0)
        out += dir == 0 ? ":f" : ":r";
    return out + "]";
}
} // namespace

std::string x(int m, const std::string &bus) { return tag("x", m, bus); }
std::string rho(int m, const std::string &bus) { return tag("rho", m, bus); }
std::string sigma(int m, const std::string &bus) { return tag("sig", m, bus); }
std::string p_load(int m, const std::string &bus) { return tag("pD", m, bus); }
std::string q_load(int m, const std::string &bus) { return tag("qD", m, bus); }
std::string c_bus(int m, const std::string &bus) { return tag("cii", m, bus); }
std::string c_line(int m, std::size_t l) { return tag("cij", m, l); }
std::string s_line(int m, std::size_t l) { return tag("sij", m, l); }
std::string f_p(int m, std::size_t l, int dir) { return tag("fP", m, l, dir); }
std::string f_q(int m, std::size_t l, int dir) { return tag("fQ", m, l, dir); }
std::string p_gen(const std::string &der_id) { return "pG[" + der_id + "]"; }
std::string q_gen(const std::string &der_id) { return "qG[" + der_id + "]"; }
std::string exch_p(int m) { return "dP[" + std::to_string(m) + "]"; }
std::string exch_q(int m) { return "dQ[" + std::to_string(m) + "]"; }
std::string c_link_node(int m) { return "Ctt[" + std::to_string(m) + "]"; }
std::string c_link(const std::string &line_id) { return "Ct[" + line_id + "]"; }
std::string s_link(const std::string &line_id) { return "St[" + line_id + "]"; }
std::string z(const std::string &line_id) { return "Z[" + line_id + "]"; }
std::string f_link_p(const std::string &line_id, int dir)
{
    return std::string("ftP[") + line_id + (dir == 0 ? ":f]" : ":r]");
}
std::string f_link_q(const std::string &line_id, int dir)
{
    return std::string("ftQ[") + line_id + (dir == 0 ? ":f]" : ":r]");
}

} // namespace vn

ZipBox zip_bounds(const Load &load, double c_min, double c_max)
{
    if (!(0 < c_min && c_min <= c_max))
        throw ValidationError("zip_bounds requires 0 < c_min <= c_max");
    auto p_at = [&](double c) {
        return load.p_bar * (load.zip_p.z * c + load.zip_p.i * std::sqrt(c) + load.zip_p.p);
    };
    auto q_at = [&](double c) {
        return load.q_bar * (load.zip_q.z * c + load.zip_q.i * std::sqrt(c) + load.zip_q.p);
    };
    return {p_at(c_min), p_at(c_max), q_at(c_min), q_at(c_max)};
}

std::string cut_kind_name(CutKind k)
{
    switch (k)
    {
    case CutKind::nadir_min: return "nadir_min";
    case CutKind::nadir_max: return "nadir_max";
    case CutKind::ss_min: return "ss_min";
    case CutKind::ss_max: return "ss_max";
    }
    return "?";
}

namespace
{

constexpr double kZipLinearTol = 1e-12;

double link_big_m_p(const NetworkCase &c, const LinkingLine &l)
{
    if (l.big_m_p)
        return *l.big_m_p;
    const double vmax = std::max(c.microgrid(l.from_mg).bus(c.microgrid(l.from_mg).boundary_bus).v_max,
                                 c.microgrid(l.to_mg).bus(c.microgrid(l.to_mg).boundary_bus).v_max);
    return 2.0 * vmax * vmax * (std::abs(l.g) + std::abs(l.b));
}

double link_big_m_q(const NetworkCase &c, const LinkingLine &l)
{
    if (l.big_m_q)
        return *l.big_m_q;
    return link_big_m_p(c, l);
}

} // namespace

ModelInstance build_base_model(const NetworkCase &c)
{
    ModelInstance md;

    // ---- variables ----
    for (const Microgrid &m : c.microgrids)
    {
        for (const Bus &b : m.buses)
            md.add_var(vn::c_bus(m.id, b.id), VarKind::continuous, b.v_min * b.v_min, b.v_max * b.v_max);

        for (const Load &l : m.loads)
        {
            const Bus &b = m.bus(l.bus);
            const ZipBox zb = zip_bounds(l, b.v_min * b.v_min, b.v_max * b.v_max);
            md.add_var(vn::p_load(m.id, l.bus), VarKind::continuous, zb.p_min, zb.p_max);
            md.add_var(vn::q_load(m.id, l.bus), VarKind::continuous, zb.q_min, zb.q_max);
            md.add_var(vn::x(m.id, l.bus), VarKind::binary, 0.0, 1.0);
            md.add_var(vn::rho(m.id, l.bus), VarKind::continuous, 0.0, zb.p_max);
            md.add_var(vn::sigma(m.id, l.bus), VarKind::continuous, 0.0, zb.q_max);
        }

        for (std::size_t li = 0; li < m.lines.size(); ++li)
        {
            const Line &l = m.lines[li];
            const double vv = m.bus(l.from_bus).v_max * m.bus(l.to_bus).v_max;
            md.add_var(vn::c_line(m.id, li), VarKind::continuous, -vv, vv);
            md.add_var(vn::s_line(m.id, li), VarKind::continuous, -vv, vv);
            const double vmax2 = std::max(std::pow(m.bus(l.from_bus).v_max, 2),
                                          std::pow(m.bus(l.to_bus).v_max, 2));
            const double fcap = 2.0 * vmax2 * (std::abs(l.g) + std::abs(l.b));
            for (int dir : {0, 1})
            {
                md.add_var(vn::f_p(m.id, li, dir), VarKind::continuous, -fcap, fcap);
                md.add_var(vn::f_q(m.id, li, dir), VarKind::continuous, -fcap, fcap);
            }
        }

        for (const Der &d : m.ders)
        {
            // capacity and single-step ramp limits folded into the bounds
            const double lo = std::max(d.p_min, d.p_initial - d.ramp_down);
            const double hi = std::min(d.p_max, d.p_initial + d.ramp_up);
            if (lo > hi)
                throw ValidationError("DER '" + d.id + "': ramp window excludes capacity range");
            md.add_var(vn::p_gen(d.id), VarKind::continuous, lo, hi);
            md.add_var(vn::q_gen(d.id), VarKind::continuous, d.q_min, d.q_max);
        }

        double cap_p = 0.0, cap_q = 0.0;
        for (const LinkingLine &l : c.linking_lines)
            if (l.from_mg == m.id || l.to_mg == m.id)
            {
                cap_p += l.p_flow_max;
                cap_q += l.q_flow_max;
            }
        md.add_var(vn::exch_p(m.id), VarKind::continuous, -cap_p, cap_p);
        md.add_var(vn::exch_q(m.id), VarKind::continuous, -cap_q, cap_q);

        const Bus &pcc = m.bus(m.boundary_bus);
        md.add_var(vn::c_link_node(m.id), VarKind::continuous, pcc.v_min * pcc.v_min,
                   pcc.v_max * pcc.v_max);
    }

    for (const LinkingLine &l : c.linking_lines)
    {
        const Microgrid &ma = c.microgrid(l.from_mg);
        const Microgrid &mb = c.microgrid(l.to_mg);
        const double vv = ma.bus(ma.boundary_bus).v_max * mb.bus(mb.boundary_bus).v_max;
        md.add_var(vn::c_link(l.id), VarKind::continuous, -vv, vv);
        md.add_var(vn::s_link(l.id), VarKind::continuous, -vv, vv);
        md.add_var(vn::z(l.id), VarKind::binary, 0.0, 1.0);
        for (int dir : {0, 1})
        {
            md.add_var(vn::f_link_p(l.id, dir), VarKind::continuous, -l.p_flow_max, l.p_flow_max);
            md.add_var(vn::f_link_q(l.id, dir), VarKind::continuous, -l.q_flow_max, l.q_flow_max);
        }
    }

    // ---- objective: total value of lost load ----
    for (const Microgrid &m : c.microgrids)
        for (const Load &l : m.loads)
        {
            md.objective_constant += l.voll * l.p_bar;
            md.set_objective(md.var(vn::x(m.id, l.bus)), -l.voll * l.p_bar);
        }

    // ---- per-microgrid constraints ----
    for (const Microgrid &m : c.microgrids)
    {
        // line flow definitions, loss caps, voltage-product cones
        for (std::size_t li = 0; li < m.lines.size(); ++li)
        {
            const Line &l = m.lines[li];
            const int cii_i = md.var(vn::c_bus(m.id, l.from_bus));
            const int cii_j = md.var(vn::c_bus(m.id, l.to_bus));
            const int cij = md.var(vn::c_line(m.id, li));
            const int sij = md.var(vn::s_line(m.id, li));

            auto def = [&](const std::string &fvar, int cii, double bsign, bool reactive,
                           const std::string &label) {
                // active:   f = G (C_ii - C_ij) - B S_ij   (reversed: +B S_ij)
                // reactive: f = -B (C_ii - C_ij) - G S_ij  (reversed: +G S_ij)
                const double gc = reactive ? -l.b : l.g;
                const double sc = reactive ? -l.g * bsign : -l.b * bsign;
                LinearConstraint row;
                row.name = label;
                row.terms = {{md.var(fvar), 1.0}, {cii, -gc}, {cij, gc}, {sij, -sc}};
                row.sense = Sense::eq;
                row.rhs = 0.0;
                md.add_linear(std::move(row));
            };
            const std::string base = std::to_string(m.id) + ":" + std::to_string(li);
            def(vn::f_p(m.id, li, 0), cii_i, 1.0, false, "flowP_f[" + base + "]");
            def(vn::f_p(m.id, li, 1), cii_j, -1.0, false, "flowP_r[" + base + "]");
            def(vn::f_q(m.id, li, 0), cii_i, 1.0, true, "flowQ_f[" + base + "]");
            def(vn::f_q(m.id, li, 1), cii_j, -1.0, true, "flowQ_r[" + base + "]");

            md.add_linear({"loss[" + base + "]",
                           {{md.var(vn::f_p(m.id, li, 0)), 1.0}, {md.var(vn::f_p(m.id, li, 1)), 1.0}},
                           Sense::le,
                           l.p_loss_max});

            ConeConstraint cone;
            cone.name = "vcone[" + base + "]";
            cone.e1 = {{{cii_i, 1.0}}, 0.0};
            cone.e2 = {{{cii_j, 1.0}}, 0.0};
            cone.vec = {{{{cij, 1.0}}, 0.0}, {{{sij, 1.0}}, 0.0}};
            md.add_cone(std::move(cone));
        }

        // nodal power balance with the linearized shed products
        for (const Bus &b : m.buses)
        {
            LinearConstraint p_row, q_row;
            p_row.name = "balP[" + std::to_string(m.id) + ":" + b.id + "]";
            q_row.name = "balQ[" + std::to_string(m.id) + ":" + b.id + "]";
            p_row.sense = q_row.sense = Sense::eq;
            p_row.rhs = q_row.rhs = 0.0;

            for (const Der &d : m.ders)
                if (d.bus == b.id)
                {
                    p_row.terms.push_back({md.var(vn::p_gen(d.id)), 1.0});
                    q_row.terms.push_back({md.var(vn::q_gen(d.id)), 1.0});
                }
            for (const Load &l : m.loads)
                if (l.bus == b.id)
                {
                    p_row.terms.push_back({md.var(vn::rho(m.id, b.id)), -1.0});
                    q_row.terms.push_back({md.var(vn::sigma(m.id, b.id)), -1.0});
                }
            if (b.is_boundary)
            {
                p_row.terms.push_back({md.var(vn::exch_p(m.id)), 1.0});
                q_row.terms.push_back({md.var(vn::exch_q(m.id)), 1.0});
            }
            for (std::size_t li = 0; li < m.lines.size(); ++li)
            {
                if (m.lines[li].from_bus == b.id)
                {
                    p_row.terms.push_back({md.var(vn::f_p(m.id, li, 0)), -1.0});
                    q_row.terms.push_back({md.var(vn::f_q(m.id, li, 0)), -1.0});
                }
                if (m.lines[li].to_bus == b.id)
                {
                    p_row.terms.push_back({md.var(vn::f_p(m.id, li, 1)), -1.0});
                    q_row.terms.push_back({md.var(vn::f_q(m.id, li, 1)), -1.0});
                }
            }
            md.add_linear(std::move(p_row));
            md.add_linear(std::move(q_row));
        }

        // ZIP demand relaxation, tightening hyperplanes, product big-M block
        for (const Load &l : m.loads)
        {
            const Bus &b = m.bus(l.bus);
            const double c_min = b.v_min * b.v_min, c_max = b.v_max * b.v_max;
            const ZipBox zb = zip_bounds(l, c_min, c_max);
            const int cii = md.var(vn::c_bus(m.id, l.bus));
            const std::string key = std::to_string(m.id) + ":" + l.bus;

            auto zip_block = [&](double bar, const ZipTriple &k, const std::string &dvar,
                                 double d_lo, double d_hi, const char *prefix) {
                const int dv = md.var(dvar);
                if (bar <= kZipLinearTol)
                    return;  // demand fixed at zero by bounds
                if (k.i <= kZipLinearTol)
                {
                    // no square-root term: the relaxed demand curve is affine
                    md.add_linear({std::string(prefix) + "zip[" + key + "]",
                                   {{dv, 1.0 / bar}, {cii, -k.z}},
                                   Sense::le,
                                   k.p});
                }
                else
                {
                    // (kI sqrt(C))^2 >= (d/bar - kZ C - kP)^2 written on the
                    // identity C = ((C+1)/2)^2 - ((C-1)/2)^2
                    ConeConstraint cone;
                    cone.name = std::string(prefix) + "zipcone[" + key + "]";
                    cone.e1 = {{{cii, 0.5 * k.i}}, 0.5 * k.i};
                    cone.e2 = cone.e1;
                    cone.vec = {{{{cii, 0.5 * k.i}}, -0.5 * k.i},
                                {{{dv, 1.0 / bar}, {cii, -k.z}}, -k.p}};
                    md.add_cone(std::move(cone));
                }
                if (c_max - c_min > 1e-12)
                {
                    const double slope = (d_hi - d_lo) / (c_max - c_min);
                    md.add_linear({std::string(prefix) + "ziphp[" + key + "]",
                                   {{dv, 1.0}, {cii, -slope}},
                                   Sense::ge,
                                   d_lo - slope * c_min});
                }
            };
            zip_block(l.p_bar, l.zip_p, vn::p_load(m.id, l.bus), zb.p_min, zb.p_max, "p");
            zip_block(l.q_bar, l.zip_q, vn::q_load(m.id, l.bus), zb.q_min, zb.q_max, "q");

            auto product_block = [&](const std::string &pvar, const std::string &dvar, double big_m,
                                     const char *prefix) {
                const int pv = md.var(pvar), dv = md.var(dvar), xv = md.var(vn::x(m.id, l.bus));
                const std::string nm = std::string(prefix) + "[" + key + "]";
                md.add_linear({nm + ":a", {{pv, 1.0}, {dv, -1.0}, {xv, big_m}}, Sense::le, big_m});
                md.add_linear({nm + ":b", {{pv, 1.0}, {dv, -1.0}, {xv, -big_m}}, Sense::ge, -big_m});
                md.add_linear({nm + ":c", {{pv, 1.0}, {xv, -big_m}}, Sense::le, 0.0});
                md.add_linear({nm + ":d", {{pv, 1.0}, {xv, big_m}}, Sense::ge, 0.0});
            };
            // a valid deactivation constant must cover the full demand range,
            // which can exceed the nominal draw when impedance/current terms
            // push demand above its value at nominal voltage
            product_block(vn::rho(m.id, l.bus), vn::p_load(m.id, l.bus),
                          std::max(l.p_bar, zb.p_max), "bigmp");
            product_block(vn::sigma(m.id, l.bus), vn::q_load(m.id, l.bus),
                          std::max(l.q_bar, zb.q_max), "bigmq");
        }
    }

    // ---- linking grid ----
    for (const Microgrid &m : c.microgrids)
    {
        LinearConstraint p_row, q_row;
        p_row.name = "linkbalP[" + std::to_string(m.id) + "]";
        q_row.name = "linkbalQ[" + std::to_string(m.id) + "]";
        p_row.sense = q_row.sense = Sense::eq;
        p_row.terms = {{md.var(vn::exch_p(m.id)), 1.0}};
        q_row.terms = {{md.var(vn::exch_q(m.id)), 1.0}};
        for (const LinkingLine &l : c.linking_lines)
        {
            if (l.from_mg == m.id)
            {
                p_row.terms.push_back({md.var(vn::f_link_p(l.id, 0)), 1.0});
                q_row.terms.push_back({md.var(vn::f_link_q(l.id, 0)), 1.0});
            }
            if (l.to_mg == m.id)
            {
                p_row.terms.push_back({md.var(vn::f_link_p(l.id, 1)), 1.0});
                q_row.terms.push_back({md.var(vn::f_link_q(l.id, 1)), 1.0});
            }
        }
        md.add_linear(std::move(p_row));
        md.add_linear(std::move(q_row));
    }

    for (const LinkingLine &l : c.linking_lines)
    {
        const int ctt_m = md.var(vn::c_link_node(l.from_mg));
        const int ctt_k = md.var(vn::c_link_node(l.to_mg));
        const int ct = md.var(vn::c_link(l.id));
        const int st = md.var(vn::s_link(l.id));
        const int zv = md.var(vn::z(l.id));
        const double mp = link_big_m_p(c, l);
        const double mq = link_big_m_q(c, l);

        // switched flow definitions: when Z = 1 the two inequalities pin the
        // flow to its cone-variable expression; when Z = 0 they relax
        auto switched = [&](const std::string &fvar, int ctt, double bsign, bool reactive,
                            double big_m, const std::string &label) {
            const double gc = reactive ? -l.b : l.g;
            const double sc = reactive ? -l.g * bsign : -l.b * bsign;
            const int fv = md.var(fvar);
            md.add_linear({label + ":lo",
                           {{fv, -1.0}, {ctt, gc}, {ct, -gc}, {st, sc}, {zv, big_m}},
                           Sense::le,
                           big_m});
            md.add_linear({label + ":hi",
                           {{fv, -1.0}, {ctt, gc}, {ct, -gc}, {st, sc}, {zv, -big_m}},
                           Sense::ge,
                           -big_m});
        };
        switched(vn::f_link_p(l.id, 0), ctt_m, 1.0, false, mp, "lswP_f[" + l.id + "]");
        switched(vn::f_link_p(l.id, 1), ctt_k, -1.0, false, mp, "lswP_r[" + l.id + "]");
        switched(vn::f_link_q(l.id, 0), ctt_m, 1.0, true, mq, "lswQ_f[" + l.id + "]");
        switched(vn::f_link_q(l.id, 1), ctt_k, -1.0, true, mq, "lswQ_r[" + l.id + "]");

        // open switch forces zero flow
        for (int dir : {0, 1})
        {
            md.add_linear({"lcapP[" + l.id + (dir ? ":r" : ":f") + "]:hi",
                           {{md.var(vn::f_link_p(l.id, dir)), 1.0}, {zv, -l.p_flow_max}},
                           Sense::le, 0.0});
            md.add_linear({"lcapP[" + l.id + (dir ? ":r" : ":f") + "]:lo",
                           {{md.var(vn::f_link_p(l.id, dir)), 1.0}, {zv, l.p_flow_max}},
                           Sense::ge, 0.0});
            md.add_linear({"lcapQ[" + l.id + (dir ? ":r" : ":f") + "]:hi",
                           {{md.var(vn::f_link_q(l.id, dir)), 1.0}, {zv, -l.q_flow_max}},
                           Sense::le, 0.0});
            md.add_linear({"lcapQ[" + l.id + (dir ? ":r" : ":f") + "]:lo",
                           {{md.var(vn::f_link_q(l.id, dir)), 1.0}, {zv, l.q_flow_max}},
                           Sense::ge, 0.0});
        }

        md.add_linear({"lloss[" + l.id + "]",
                       {{md.var(vn::f_link_p(l.id, 0)), 1.0}, {md.var(vn::f_link_p(l.id, 1)), 1.0}},
                       Sense::le,
                       l.p_loss_max});

        ConeConstraint cone;
        cone.name = "lvcone[" + l.id + "]";
        cone.e1 = {{{ctt_m, 1.0}}, 0.0};
        cone.e2 = {{{ctt_k, 1.0}}, 0.0};
        cone.vec = {{{{ct, 1.0}}, 0.0}, {{{st, 1.0}}, 0.0}};
        md.add_cone(std::move(cone));
    }

    return md;
}

LinearConstraint frequency_cut(const NetworkCase &c, const ModelInstance &model,
                               const std::set<int> &S, CutKind kind,
                               const std::set<std::string> *support)
{
    if (S.empty())
        throw ValidationError("frequency cut requires a nonempty island candidate");
    const auto [alpha, beta] = component_coefficients(c, S);
    const bool nadir = kind == CutKind::nadir_min || kind == CutKind::nadir_max;
    const bool lower = kind == CutKind::nadir_min || kind == CutKind::ss_min;
    const double coef = nadir ? alpha : beta;
    const double limit = nadir ? (lower ? c.frequency_limits.nadir_min : c.frequency_limits.nadir_max)
                               : (lower ? c.frequency_limits.ss_min : c.frequency_limits.ss_max);

    double dp0 = 0.0, shed_cap = 0.0;
    for (int m : S)
    {
        dp0 += c.microgrid(m).delta_p0;
        for (const Load &l : c.microgrid(m).loads)
        {
            const Bus &b = c.microgrid(m).bus(l.bus);
            shed_cap += zip_bounds(l, b.v_min * b.v_min, b.v_max * b.v_max).p_max;
        }
    }

    double big_m;
    if (nadir && c.frequency_limits.big_m_nadir)
        big_m = *c.frequency_limits.big_m_nadir;
    else if (!nadir && c.frequency_limits.big_m_ss)
        big_m = *c.frequency_limits.big_m_ss;
    else
        // covers the largest attainable |coef * mismatch| plus the bound itself
        big_m = coef * (std::abs(dp0) + 2.0 * shed_cap) + std::abs(limit) + 1.0;

    LinearConstraint cut;
    cut.name = "freq_" + cut_kind_name(kind) + "[";
    for (int m : S)
        cut.name += (cut.name.back() == '[' ? "" : ",") + std::to_string(m);
    cut.name += "]";
    cut.sense = lower ? Sense::ge : Sense::le;

    const double sgn = lower ? 1.0 : -1.0;  // sign on the big-M relaxation terms
    for (int m : S)
        for (const Load &l : c.microgrid(m).loads)
        {
            cut.terms.push_back({model.var(vn::p_load(m, l.bus)), coef});
            cut.terms.push_back({model.var(vn::rho(m, l.bus)), -coef});
        }

    double internal_count = 0.0;
    for (const LinkingLine *l : internal_edges(c, S))
    {
        if (support && support->count(l->id) == 0)
            continue;
        cut.terms.push_back({model.var(vn::z(l->id)), -sgn * big_m});
        internal_count += 1.0;
    }
    for (const LinkingLine *l : cut_edges(c, S))
        cut.terms.push_back({model.var(vn::z(l->id)), sgn * big_m});

    if (support)
        for (const std::string &id : *support)
            cut.name += "|" + id;
    cut.rhs = limit + coef * dp0 - sgn * internal_count * big_m;
    return cut;
}

Solution extract_solution(const NetworkCase &c, const ModelInstance &model,
                          const std::vector<double> &raw)
{
    if (raw.size() != model.vars.size())
        throw ValidationError("solution vector length does not match the model");
    Solution s;
    s.values = raw;
    s.objective = model.eval_objective(raw);
    for (const LinkingLine &l : c.linking_lines)
        if (s.value(model, vn::z(l.id)) > 0.5)
            s.topology.on_edges.insert(l.id);
    for (const Microgrid &m : c.microgrids)
    {
        double cut_mg = 0.0;
        for (const Load &l : m.loads)
        {
            const int on = s.value(model, vn::x(m.id, l.bus)) > 0.5 ? 1 : 0;
            s.load_status[std::to_string(m.id) + ":" + l.bus] = on;
            if (!on)
                cut_mg += l.p_bar;
        }
        s.curtailment_by_mg[m.id] = cut_mg;
        s.curtailment_pu += cut_mg;
        for (const Der &d : m.ders)
            s.der_dispatch[d.id] = s.value(model, vn::p_gen(d.id));
    }
    return s;
}

std::string model_census(const NetworkCase &c, const ModelInstance &model)
{
    std::size_t nb = 0, nl = 0, ng = 0, nd = 0;
    for (const Microgrid &m : c.microgrids)
    {
        nb += m.buses.size();
        nl += m.lines.size();
        ng += m.ders.size();
        nd += m.loads.size();
    }
    const std::size_t nmg = c.microgrids.size(), nt = c.linking_lines.size();

    std::size_t eqs = 0, ineqs = 0;
    for (const LinearConstraint &r : model.linear)
        (r.sense == Sense::eq ? eqs : ineqs)++;

    std::ostringstream os;
    os << "microgrids " << nmg << ", buses " << nb << ", lines " << nl << ", ders " << ng
       << ", loads " << nd << ", linking lines " << nt << "\n";
    os << "variables " << model.vars.size() << " (binary " << model.num_binaries() << ")\n";
    os << "linear rows " << model.linear.size() << " (eq " << eqs << ", ineq " << ineqs << ")\n";
    os << "cones " << model.cones.size() << "\n";
    os << "cut pool " << model.cut_pool.size() << "\n";
    return os.str();
}

namespace
{

void dump_expr(std::ostream &os, const ModelInstance &m, const std::vector<LinTerm> &terms)
{
    for (const LinTerm &t : terms)
        os << (t.coef >= 0 ? " +" : " ") << t.coef << " " << m.vars[t.var].name;
}

} // namespace

std::string dump_model(const ModelInstance &m)
{
    std::ostringstream os;
    os.precision(17);
    os << "minimize\n  " << m.objective_constant;
    for (std::size_t i = 0; i < m.vars.size(); ++i)
        if (m.objective[i] != 0.0)
            os << (m.objective[i] >= 0 ? " +" : " ") << m.objective[i] << " " << m.vars[i].name;
    os << "\nvariables " << m.vars.size() << "\n";
    for (const Variable &v : m.vars)
        os << "  " << v.name << (v.kind == VarKind::binary ? " bin " : " cont ") << v.lower << " "
           << v.upper << "\n";
    os << "linear " << m.linear.size() + m.cut_pool.size() << "\n";
    auto put_rows = [&](const std::vector<LinearConstraint> &rows) {
        for (const LinearConstraint &r : rows)
        {
            os << "  " << r.name << ":";
            dump_expr(os, m, r.terms);
            os << (r.sense == Sense::le ? " <= " : r.sense == Sense::eq ? " == " : " >= ") << r.rhs
               << "\n";
        }
    };
    put_rows(m.linear);
    put_rows(m.cut_pool);
    os << "cones " << m.cones.size() << "\n";
    for (const ConeConstraint &cc : m.cones)
    {
        os << "  " << cc.name << ": norm2[";
        for (std::size_t i = 0; i < cc.vec.size(); ++i)
        {
            if (i)
                os << " ;";
            os << " " << cc.vec[i].constant;
            dump_expr(os, m, cc.vec[i].terms);
        }
        os << " ] <= (" << cc.e1.constant;
        dump_expr(os, m, cc.e1.terms);
        os << ") * (" << cc.e2.constant;
        dump_expr(os, m, cc.e2.terms);
        os << ")\n";
    }
    return os.str();
}

} // namespace mmg
