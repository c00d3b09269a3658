#include "mmg/case.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "mmg/errors.hpp"

namespace mmg
{

using nlohmann::json;

const Bus &Microgrid::bus(const std::string &bus_id) const
{
    for (const Bus &b : buses)
        if (b.id == bus_id)
            return b;
    throw ValidationError("unknown bus '" + bus_id + "' in microgrid " + std::to_string(id));
}

double Microgrid::total_p_load() const
{
    double t = 0.0;
    for (const Load &l : loads)
        t += l.p_bar;
    return t;
}

const Microgrid &NetworkCase::microgrid(int mg_id) const
{
    for (const Microgrid &m : microgrids)
        if (m.id == mg_id)
            return m;
    throw ValidationError("unknown microgrid id " + std::to_string(mg_id));
}

const LinkingLine &NetworkCase::linking_line(const std::string &id) const
{
    for (const LinkingLine &l : linking_lines)
        if (l.id == id)
            return l;
    throw ValidationError("unknown linking line '" + id + "'");
}

std::vector<int> NetworkCase::microgrid_ids() const
{
    std::vector<int> ids;
    ids.reserve(microgrids.size());
    for (const Microgrid &m : microgrids)
        ids.push_back(m.id);
    return ids;
}

double NetworkCase::total_p_load() const
{
    double t = 0.0;
    for (const Microgrid &m : microgrids)
        t += m.total_p_load();
    return t;
}

void NetworkCase::rescale_severity(double new_severity)
{
    if (std::abs(severity) < 1e-12)
        throw ValidationError("cannot rescale a zero-severity case");
    const double factor = new_severity / severity;
    for (Microgrid &m : microgrids)
    {
        m.delta_p0 *= factor;
        m.delta_q0 *= factor;
    }
    severity = new_severity;
}

namespace
{

void check(bool ok, const std::string &msg)
{
    if (!ok)
        throw ValidationError(msg);
}

bool internal_graph_connected(const Microgrid &m)
{
    if (m.buses.empty())
        return false;
    std::map<std::string, std::vector<std::string>> adj;
    for (const Bus &b : m.buses)
        adj[b.id];
    for (const Line &l : m.lines)
    {
        adj[l.from_bus].push_back(l.to_bus);
        adj[l.to_bus].push_back(l.from_bus);
    }
    std::set<std::string> seen{m.buses.front().id};
    std::queue<std::string> q;
    q.push(m.buses.front().id);
    while (!q.empty())
    {
        const std::string u = q.front();
        q.pop();
        for (const std::string &v : adj[u])
            if (seen.insert(v).second)
                q.push(v);
    }
    return seen.size() == m.buses.size();
}

} // namespace

void NetworkCase::validate() const
{
    check(bases.s_base_kw > 0 && bases.v_base_kv > 0 && bases.f_nominal_hz > 0,
          "bases must be strictly positive");
    check(damping >= 0, "damping must be nonnegative");
    check(!microgrids.empty(), "case needs at least one microgrid");

    std::set<int> mg_ids;
    double t_lag_ref = microgrids.front().dynamics.t_lag;
    double dp0_sum = 0.0;
    for (const Microgrid &m : microgrids)
    {
        const std::string tag = "microgrid " + std::to_string(m.id) + ": ";
        check(mg_ids.insert(m.id).second, tag + "duplicate microgrid id");
        check(!m.buses.empty(), tag + "no buses");

        std::set<std::string> bus_ids;
        int boundary_count = 0;
        for (const Bus &b : m.buses)
        {
            check(bus_ids.insert(b.id).second, tag + "duplicate bus '" + b.id + "'");
            check(b.v_min > 0 && b.v_min <= b.v_max, tag + "bus '" + b.id + "': need 0 < v_min <= v_max");
            if (b.is_boundary)
                ++boundary_count;
        }
        check(boundary_count == 1 && bus_ids.count(m.boundary_bus) == 1 &&
                  m.bus(m.boundary_bus).is_boundary,
              tag + "exactly one boundary bus required");

        for (const Line &l : m.lines)
        {
            check(bus_ids.count(l.from_bus) && bus_ids.count(l.to_bus),
                  tag + "line endpoints must be buses of the same microgrid");
            check(l.p_loss_max > 0, tag + "line loss cap must be positive");
        }
        check(internal_graph_connected(m), tag + "internal graph must be connected");

        for (const Der &d : m.ders)
        {
            check(bus_ids.count(d.bus), tag + "DER '" + d.id + "' references unknown bus");
            check(d.p_min <= d.p_initial && d.p_initial <= d.p_max,
                  tag + "DER '" + d.id + "': need p_min <= p_initial <= p_max");
            check(d.ramp_up >= 0 && d.ramp_down >= 0, tag + "DER '" + d.id + "': ramp limits nonnegative");
        }
        for (const Load &l : m.loads)
        {
            check(bus_ids.count(l.bus), tag + "load references unknown bus '" + l.bus + "'");
            check(l.p_bar >= 0 && l.q_bar >= 0, tag + "load at '" + l.bus + "': demand must be nonnegative");
            check(std::abs(l.zip_p.z + l.zip_p.i + l.zip_p.p - 1.0) <= 1e-9 &&
                      std::abs(l.zip_q.z + l.zip_q.i + l.zip_q.p - 1.0) <= 1e-9,
                  tag + "load at '" + l.bus + "': zip coefficients must sum to 1");
            check(l.zip_p.z >= 0 && l.zip_p.i >= 0 && l.zip_p.p >= 0 &&
                      l.zip_q.z >= 0 && l.zip_q.i >= 0 && l.zip_q.p >= 0,
                  tag + "load at '" + l.bus + "': zip coefficients must be nonnegative");
            check(l.voll >= 0, tag + "load at '" + l.bus + "': voll must be nonnegative");
        }

        const VscDynamics &dyn = m.dynamics;
        check(dyn.inertia > 0 && dyn.droop > 0 && dyn.t_lead > 0 && dyn.t_lag > 0,
              tag + "dynamic parameters must be strictly positive");
        check(std::abs(dyn.t_lag - t_lag_ref) <= 1e-12,
              tag + "lag time constant must be identical across microgrids");
        dp0_sum += m.delta_p0;
    }

    std::set<std::string> line_ids;
    for (const LinkingLine &l : linking_lines)
    {
        const std::string tag = "linking line '" + l.id + "': ";
        check(line_ids.insert(l.id).second, tag + "duplicate id");
        check(l.from_mg != l.to_mg, tag + "endpoints must be distinct microgrids");
        check(mg_ids.count(l.from_mg) && mg_ids.count(l.to_mg), tag + "endpoint microgrid unknown");
        check(l.p_flow_max > 0 && l.q_flow_max > 0 && l.p_loss_max > 0, tag + "flow bounds must be positive");
        if (l.big_m_p)
            check(*l.big_m_p > 0, tag + "big_m_p must be positive");
        if (l.big_m_q)
            check(*l.big_m_q > 0, tag + "big_m_q must be positive");
    }

    check(std::abs(dp0_sum - severity) <= 1e-6,
          "sum of microgrid delta_p0 (" + std::to_string(dp0_sum) +
              ") inconsistent with severity (" + std::to_string(severity) + ")");

    const FrequencyLimits &f = frequency_limits;
    check(f.nadir_min <= 0 && f.ss_min <= 0, "lower frequency bounds must be nonpositive");
    check(f.nadir_max >= 0 && f.ss_max >= 0, "upper frequency bounds must be nonnegative");
}

namespace
{

ZipTriple parse_zip(const json &j, const std::string &ctx)
{
    if (!j.is_array() || j.size() != 3)
        throw ParseError(ctx + ": zip triple must be an array of 3 numbers");
    ZipTriple z;
    z.z = j[0].get<double>();
    z.i = j[1].get<double>();
    z.p = j[2].get<double>();
    return z;
}

} // namespace

NetworkCase parse_case(const std::string &json_text)
{
    json j;
    try
    {
        j = json::parse(json_text);
    }
    catch (const json::parse_error &e)
    {
        throw ParseError(e.what());
    }

    NetworkCase c;
    try
    {
        if (j.contains("metadata"))
        {
            c.name = j["metadata"].value("name", "");
            c.note = j["metadata"].value("note", "");
        }
        const json &jb = j.at("bases");
        c.bases.s_base_kw = jb.at("s_base_kw").get<double>();
        c.bases.v_base_kv = jb.at("v_base_kv").get<double>();
        c.bases.f_nominal_hz = jb.value("f_nominal_hz", 50.0);

        c.damping = j.at("damping").get<double>();
        c.severity = j.at("severity").get<double>();

        const json &jf = j.at("frequency_limits");
        const double fn = c.bases.f_nominal_hz;
        // limits are given in Hz and stored as pu deviations
        c.frequency_limits.nadir_min = jf.at("nadir_min_hz").get<double>() / fn;
        c.frequency_limits.nadir_max = jf.at("nadir_max_hz").get<double>() / fn;
        c.frequency_limits.ss_min = jf.at("ss_min_hz").get<double>() / fn;
        c.frequency_limits.ss_max = jf.at("ss_max_hz").get<double>() / fn;
        if (jf.contains("big_m_nadir"))
            c.frequency_limits.big_m_nadir = jf["big_m_nadir"].get<double>();
        if (jf.contains("big_m_ss"))
            c.frequency_limits.big_m_ss = jf["big_m_ss"].get<double>();

        for (const json &jm : j.at("microgrids"))
        {
            Microgrid m;
            m.id = jm.at("id").get<int>();
            m.boundary_bus = jm.at("boundary_bus").get<std::string>();
            m.delta_p0 = jm.at("delta_p0").get<double>();
            m.delta_q0 = jm.value("delta_q0", 0.0);

            const json &jd = jm.at("dynamics");
            m.dynamics.inertia = jd.at("inertia_s").get<double>();
            m.dynamics.droop = jd.at("droop").get<double>();
            m.dynamics.t_lead = jd.at("t_lead_s").get<double>();
            m.dynamics.t_lag = jd.at("t_lag_s").get<double>();

            for (const json &jbus : jm.at("buses"))
            {
                Bus b;
                b.id = jbus.at("id").get<std::string>();
                b.microgrid = m.id;
                b.v_min = jbus.at("v_min").get<double>();
                b.v_max = jbus.at("v_max").get<double>();
                b.is_boundary = (b.id == m.boundary_bus);
                m.buses.push_back(b);
            }
            for (const json &jl : jm.value("lines", json::array()))
            {
                Line l;
                l.from_bus = jl.at("from").get<std::string>();
                l.to_bus = jl.at("to").get<std::string>();
                l.g = jl.at("g").get<double>();
                l.b = jl.at("b").get<double>();
                l.p_loss_max = jl.at("p_loss_max").get<double>();
                m.lines.push_back(l);
            }
            for (const json &jg : jm.value("ders", json::array()))
            {
                Der d;
                d.id = jg.at("id").get<std::string>();
                d.bus = jg.at("bus").get<std::string>();
                d.p_min = jg.at("p_min").get<double>();
                d.p_max = jg.at("p_max").get<double>();
                d.q_min = jg.at("q_min").get<double>();
                d.q_max = jg.at("q_max").get<double>();
                d.ramp_up = jg.at("ramp_up").get<double>();
                d.ramp_down = jg.at("ramp_down").get<double>();
                d.p_initial = jg.at("p_initial").get<double>();
                m.ders.push_back(d);
            }
            for (const json &jl : jm.value("loads", json::array()))
            {
                Load l;
                l.bus = jl.at("bus").get<std::string>();
                l.p_bar = jl.at("p_bar").get<double>();
                l.q_bar = jl.at("q_bar").get<double>();
                l.zip_p = parse_zip(jl.at("zip_p"), "load at " + l.bus);
                l.zip_q = parse_zip(jl.at("zip_q"), "load at " + l.bus);
                l.voll = jl.at("voll").get<double>();
                m.loads.push_back(l);
            }
            c.microgrids.push_back(std::move(m));
        }

        for (const json &jl : j.value("linking_lines", json::array()))
        {
            LinkingLine l;
            l.id = jl.at("id").get<std::string>();
            l.from_mg = jl.at("from_mg").get<int>();
            l.to_mg = jl.at("to_mg").get<int>();
            l.g = jl.at("g").get<double>();
            l.b = jl.at("b").get<double>();
            l.p_flow_max = jl.at("p_flow_max").get<double>();
            l.q_flow_max = jl.at("q_flow_max").get<double>();
            l.p_loss_max = jl.at("p_loss_max").get<double>();
            if (jl.contains("big_m_p"))
                l.big_m_p = jl["big_m_p"].get<double>();
            if (jl.contains("big_m_q"))
                l.big_m_q = jl["big_m_q"].get<double>();
            c.linking_lines.push_back(std::move(l));
        }
    }
    catch (const json::exception &e)
    {
        throw ParseError(e.what());
    }

    c.validate();
    return c;
}

NetworkCase load_case(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open case file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_case(ss.str());
}

std::string serialize_case(const NetworkCase &c)
{
    json j;
    if (!c.name.empty() || !c.note.empty())
        j["metadata"] = {{"name", c.name}, {"note", c.note}};
    j["bases"] = {{"s_base_kw", c.bases.s_base_kw},
                  {"v_base_kv", c.bases.v_base_kv},
                  {"f_nominal_hz", c.bases.f_nominal_hz}};
    j["damping"] = c.damping;
    j["severity"] = c.severity;

    const double fn = c.bases.f_nominal_hz;
    json jf = {{"nadir_min_hz", c.frequency_limits.nadir_min * fn},
               {"nadir_max_hz", c.frequency_limits.nadir_max * fn},
               {"ss_min_hz", c.frequency_limits.ss_min * fn},
               {"ss_max_hz", c.frequency_limits.ss_max * fn}};
    if (c.frequency_limits.big_m_nadir)
        jf["big_m_nadir"] = *c.frequency_limits.big_m_nadir;
    if (c.frequency_limits.big_m_ss)
        jf["big_m_ss"] = *c.frequency_limits.big_m_ss;
    j["frequency_limits"] = jf;

    j["microgrids"] = json::array();
    for (const Microgrid &m : c.microgrids)
    {
        json jm;
        jm["id"] = m.id;
        jm["boundary_bus"] = m.boundary_bus;
        jm["delta_p0"] = m.delta_p0;
        jm["delta_q0"] = m.delta_q0;
        jm["dynamics"] = {{"inertia_s", m.dynamics.inertia},
                          {"droop", m.dynamics.droop},
                          {"t_lead_s", m.dynamics.t_lead},
                          {"t_lag_s", m.dynamics.t_lag}};
        jm["buses"] = json::array();
        for (const Bus &b : m.buses)
            jm["buses"].push_back({{"id", b.id}, {"v_min", b.v_min}, {"v_max", b.v_max}});
        jm["lines"] = json::array();
        for (const Line &l : m.lines)
            jm["lines"].push_back({{"from", l.from_bus},
                                   {"to", l.to_bus},
                                   {"g", l.g},
                                   {"b", l.b},
                                   {"p_loss_max", l.p_loss_max}});
        jm["ders"] = json::array();
        for (const Der &d : m.ders)
            jm["ders"].push_back({{"id", d.id},
                                  {"bus", d.bus},
                                  {"p_min", d.p_min},
                                  {"p_max", d.p_max},
                                  {"q_min", d.q_min},
                                  {"q_max", d.q_max},
                                  {"ramp_up", d.ramp_up},
                                  {"ramp_down", d.ramp_down},
                                  {"p_initial", d.p_initial}});
        jm["loads"] = json::array();
        for (const Load &l : m.loads)
            jm["loads"].push_back({{"bus", l.bus},
                                   {"p_bar", l.p_bar},
                                   {"q_bar", l.q_bar},
                                   {"zip_p", {l.zip_p.z, l.zip_p.i, l.zip_p.p}},
                                   {"zip_q", {l.zip_q.z, l.zip_q.i, l.zip_q.p}},
                                   {"voll", l.voll}});
        j["microgrids"].push_back(std::move(jm));
    }

    j["linking_lines"] = json::array();
    for (const LinkingLine &l : c.linking_lines)
    {
        json jl = {{"id", l.id},       {"from_mg", l.from_mg},
                   {"to_mg", l.to_mg}, {"g", l.g},
                   {"b", l.b},         {"p_flow_max", l.p_flow_max},
                   {"q_flow_max", l.q_flow_max}, {"p_loss_max", l.p_loss_max}};
        if (l.big_m_p)
            jl["big_m_p"] = *l.big_m_p;
        if (l.big_m_q)
            jl["big_m_q"] = *l.big_m_q;
        j["linking_lines"].push_back(std::move(jl));
    }

    return j.dump(2);
}

} // namespace mmg
