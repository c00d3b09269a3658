#include "mmg/cutloop.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "mmg/errors.hpp"
#include "mmg/graph.hpp"
#include "mmg/sfr.hpp"

namespace mmg
{

namespace
{

constexpr double kFreqTol = 1e-9;  // screening tolerance on pu frequency bounds

// Number of nonempty vertex subsets of the linking graph that are connected
// when every linking line is available; these are the only island candidates
// a cut can be written for.
int connected_subset_count(const NetworkCase &c)
{
    const int n = static_cast<int>(c.microgrids.size());
    if (n > 16)
        return 1 << 16;  // guard saturates; enumeration is pointless here
    std::vector<int> ids;
    for (const Microgrid &m : c.microgrids)
        ids.push_back(m.id);
    std::vector<std::pair<int, int>> edges;
    for (const LinkingLine &l : c.linking_lines)
    {
        int a = -1, b = -1;
        for (int i = 0; i < n; ++i)
        {
            if (ids[i] == l.from_mg)
                a = i;
            if (ids[i] == l.to_mg)
                b = i;
        }
        edges.emplace_back(a, b);
    }
    int count = 0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask)
    {
        // BFS from the lowest set bit, restricted to the mask
        std::uint32_t seen = mask & (~mask + 1u);
        for (bool grew = true; grew;)
        {
            grew = false;
            for (const auto &[a, b] : edges)
            {
                const std::uint32_t ma = 1u << a, mb = 1u << b;
                if ((mask & ma) && (mask & mb) && ((seen & ma) != 0) != ((seen & mb) != 0))
                {
                    seen |= ma | mb;
                    grew = true;
                }
            }
        }
        if (seen == mask)
            ++count;
    }
    return count;
}

double simulation_horizon(const SfrShape &sh, double t_lag)
{
    double slow;
    if (sh.regime == DampingRegime::under)
        slow = sh.zeta * sh.omega_n;
    else
        slow = sh.omega_n * (sh.zeta - std::sqrt(std::max(0.0, sh.zeta * sh.zeta - 1.0)));
    return std::max(20.0 * t_lag, 40.0 / std::max(slow, 1e-6));
}

} // namespace

double island_mismatch(const NetworkCase &c, const ModelInstance &model,
                       const std::set<int> &mg_ids, const std::vector<double> &values)
{
    double mismatch = 0.0;
    for (const Microgrid &m : c.microgrids)
    {
        if (mg_ids.count(m.id) == 0)
            continue;
        mismatch -= m.delta_p0;
        for (const Load &l : m.loads)
            mismatch += values[model.var(vn::p_load(m.id, l.bus))] -
                        values[model.var(vn::rho(m.id, l.bus))];
    }
    return mismatch;
}

namespace
{

// A spanning tree of the component within the currently closed edges; the
// generated cut is supported on these edges so that reopening a redundant
// chord can never deactivate it.
std::set<std::string> component_tree(const NetworkCase &c, const std::set<int> &S,
                                     const SwitchConfig &sw)
{
    std::set<std::string> tree;
    if (S.size() <= 1)
        return tree;
    std::set<int> reached{*S.begin()};
    for (bool grew = true; grew && reached.size() < S.size();)
    {
        grew = false;
        for (const LinkingLine &l : c.linking_lines)
        {
            if (sw.on_edges.count(l.id) == 0 || S.count(l.from_mg) == 0 ||
                S.count(l.to_mg) == 0)
                continue;
            if (reached.count(l.from_mg) != reached.count(l.to_mg))
            {
                reached.insert(l.from_mg);
                reached.insert(l.to_mg);
                tree.insert(l.id);
                grew = true;
            }
        }
    }
    return tree;
}

// Every spanning tree of S over the full linking graph (switch states
// ignored).  A cut supported on a tree activates whenever the island keeps
// those edges closed, so emitting one cut per tree covers every way the
// island can reassemble.  Enumeration is capped; callers fall back to the
// observed tree beyond it.
std::vector<std::set<std::string>> all_spanning_trees(const NetworkCase &c,
                                                      const std::set<int> &S)
{
    std::vector<const LinkingLine *> edges;
    for (const LinkingLine &l : c.linking_lines)
        if (S.count(l.from_mg) != 0 && S.count(l.to_mg) != 0)
            edges.push_back(&l);

    std::vector<std::set<std::string>> trees;
    if (S.size() <= 1)
        return trees;
    const std::size_t ne = edges.size();
    if (ne >= 16)
        return trees;
    const std::size_t want = S.size() - 1;
    for (std::uint32_t mask = 0; mask < (1u << ne); ++mask)
    {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != want)
            continue;
        std::set<int> reached{*S.begin()};
        for (bool grew = true; grew && reached.size() < S.size();)
        {
            grew = false;
            for (std::size_t e = 0; e < ne; ++e)
            {
                if (!(mask & (1u << e)))
                    continue;
                if (reached.count(edges[e]->from_mg) != reached.count(edges[e]->to_mg))
                {
                    reached.insert(edges[e]->from_mg);
                    reached.insert(edges[e]->to_mg);
                    grew = true;
                }
            }
        }
        if (reached.size() != S.size())
            continue;
        std::set<std::string> tree;
        for (std::size_t e = 0; e < ne; ++e)
            if (mask & (1u << e))
                tree.insert(edges[e]->id);
        trees.push_back(std::move(tree));
    }
    return trees;
}

// All nonempty vertex subsets of the linking graph that are connected when
// every linking line is available; candidates for anticipatory screening.
std::vector<std::set<int>> connected_subsets(const NetworkCase &c)
{
    std::vector<std::set<int>> out;
    const int n = static_cast<int>(c.microgrids.size());
    if (n > 16)
        return out;
    std::vector<int> ids;
    for (const Microgrid &m : c.microgrids)
        ids.push_back(m.id);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask)
    {
        std::set<int> S;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i))
                S.insert(ids[i]);
        std::set<int> reached{*S.begin()};
        for (bool grew = true; grew && reached.size() < S.size();)
        {
            grew = false;
            for (const LinkingLine &l : c.linking_lines)
                if (S.count(l.from_mg) && S.count(l.to_mg) &&
                    reached.count(l.from_mg) != reached.count(l.to_mg))
                {
                    reached.insert(l.from_mg);
                    reached.insert(l.to_mg);
                    grew = true;
                }
        }
        if (reached.size() == S.size())
            out.push_back(std::move(S));
    }
    return out;
}

} // namespace

std::vector<CutRecord> separate(const NetworkCase &c, const ModelInstance &model,
                                const Solution &sol, int iteration)
{
    const FrequencyLimits &fl = c.frequency_limits;
    std::vector<CutRecord> out;
    for (const std::set<int> &S : connected_components(c, sol.topology))
    {
        const double dp = island_mismatch(c, model, S, sol.values);
        const auto [alpha, beta] = component_coefficients(c, S);
        const std::set<std::string> tree = component_tree(c, S, sol.topology);
        auto emit = [&](CutKind kind, double metric) {
            CutRecord r;
            r.component = S;
            r.support = tree;
            r.kind = kind;
            r.alpha = alpha;
            r.beta = beta;
            r.metric = metric;
            r.iteration = iteration;
            out.push_back(std::move(r));
        };
        const double extreme = alpha * dp;
        const double steady = beta * dp;
        if (extreme < fl.nadir_min - kFreqTol)
            emit(CutKind::nadir_min, extreme);
        if (extreme > fl.nadir_max + kFreqTol)
            emit(CutKind::nadir_max, extreme);
        if (steady < fl.ss_min - kFreqTol)
            emit(CutKind::ss_min, steady);
        if (steady > fl.ss_max + kFreqTol)
            emit(CutKind::ss_max, steady);
    }
    return out;
}

CutLoopResult run_cut_loop(const NetworkCase &c, const SolveSettings &settings)
{
    using clock = std::chrono::steady_clock;
    CutLoopResult res;
    res.model = build_base_model(c);

    const int guard = 4 * connected_subset_count(c);
    const FrequencyLimits &fl_screen = c.frequency_limits;
    std::set<std::string> seen;  // (component, support, kind) keys

    for (int k = 0;; ++k)
    {
        if (k >= guard)
            throw SolverError("cut loop exceeded the iteration guard of " +
                              std::to_string(guard) + " (cut pool " +
                              std::to_string(res.model.cut_pool.size()) + ")");
        const auto t0 = clock::now();
        const int pool_before = static_cast<int>(res.model.cut_pool.size());
        res.mip = solve_misocp(res.model, settings);
        if (res.mip.status != MipStatus::optimal)
            throw SolverError("master solve failed at iteration " + std::to_string(k));
        res.solution = extract_solution(c, res.model, res.mip.values);

        std::vector<CutRecord> viol = separate(c, res.model, res.solution, k);

        IterationRecord rec;
        rec.k = k;
        rec.psi = res.mip.objective;
        rec.pool_size = pool_before;
        rec.curtailment_pu = res.solution.curtailment_pu;
        rec.curtailment_kw = res.solution.curtailment_pu * c.bases.s_base_kw;
        rec.on_edges = static_cast<int>(res.solution.topology.on_edges.size());
        rec.seconds = std::chrono::duration<double>(clock::now() - t0).count();
        res.trace.push_back(rec);

        if (const char *lv = std::getenv("MMG_LOG"); lv && *lv)
            std::fprintf(stderr,
                         "[cutloop] k=%d psi=%.6f curtail=%.1f kW pool=%d edges=%d "
                         "nodes=%d %.1fs\n",
                         k, rec.psi, rec.curtailment_kw, rec.pool_size, rec.on_edges,
                         static_cast<int>(res.mip.nodes), rec.seconds);

        if (viol.empty())
            return res;

        // Anticipatory screening: the cut family is valid for every island
        // candidate (big-M terms silence a cut whose island is not realized),
        // so once the current shed pattern violates somewhere, screen every
        // connected subset against that same pattern and cut each would-be
        // violator now instead of replaying one loop round per reassembly.
        for (const std::set<int> &S : connected_subsets(c))
        {
            const double dp = island_mismatch(c, res.model, S, res.solution.values);
            const auto [alpha, beta] = component_coefficients(c, S);
            auto emit = [&](CutKind kind, double metric) {
                CutRecord r;
                r.component = S;
                r.kind = kind;
                r.alpha = alpha;
                r.beta = beta;
                r.metric = metric;
                r.iteration = k;
                viol.push_back(std::move(r));
            };
            const double extreme = alpha * dp;
            const double steady = beta * dp;
            if (extreme < fl_screen.nadir_min - kFreqTol)
                emit(CutKind::nadir_min, extreme);
            if (extreme > fl_screen.nadir_max + kFreqTol)
                emit(CutKind::nadir_max, extreme);
            if (steady < fl_screen.ss_min - kFreqTol)
                emit(CutKind::ss_min, steady);
            if (steady > fl_screen.ss_max + kFreqTol)
                emit(CutKind::ss_max, steady);
        }

        int added = 0;
        for (CutRecord &r : viol)
        {
            // one cut per spanning tree of the island: the violated bound then
            // holds no matter which closed edges keep the island together,
            // instead of replaying the loop once per reassembly
            std::vector<std::set<std::string>> supports = all_spanning_trees(c, r.component);
            if (supports.empty())
                supports.push_back(r.support);
            for (const std::set<std::string> &support : supports)
            {
                std::string key = cut_kind_name(r.kind);
                for (int m : r.component)
                    key += "," + std::to_string(m);
                for (const std::string &id : support)
                    key += "|" + id;
                if (!seen.insert(std::move(key)).second)
                    continue;
                CutRecord stored = r;
                stored.support = support;
                res.model.cut_pool.push_back(
                    frequency_cut(c, res.model, stored.component, stored.kind, &support));
                res.cuts.push_back(std::move(stored));
                ++added;
            }
        }
        if (added == 0)
            throw SolverError("separation stalled: violations persist but every "
                              "matching cut is already in the pool");
    }
}

std::string trace_csv(const std::vector<IterationRecord> &trace)
{
    std::ostringstream os;
    os.precision(12);
    os << "k,psi,cut_pool,curtailment_pu,curtailment_kw,edges,seconds\n";
    for (const IterationRecord &r : trace)
        os << r.k << "," << r.psi << "," << r.pool_size << "," << r.curtailment_pu << ","
           << r.curtailment_kw << "," << r.on_edges << "," << r.seconds << "\n";
    return os.str();
}

VerifyReport verify(const NetworkCase &c, const ModelInstance &model, const Solution &sol)
{
    constexpr double tol = 1e-6;
    const double f0 = c.bases.f_nominal_hz;
    const FrequencyLimits &fl = c.frequency_limits;
    VerifyReport rep;
    auto flag = [&](const std::string &msg) {
        rep.violations.push_back(msg);
        rep.ok = false;
    };

    for (const std::set<int> &S : connected_components(c, sol.topology))
    {
        ComponentCheck ck;
        ck.component = S;
        ck.mismatch_pu = island_mismatch(c, model, S, sol.values);
        const SfrAggregate agg = aggregate_for(c, S);
        const SfrShape sh = response_shape(agg);
        const double t_end = simulation_horizon(sh, agg.t_lag);
        const SfrTrajectory traj =
            simulate_step(agg, ck.mismatch_pu, t_end, std::clamp(t_end / 2e5, 2e-5, 1e-3));
        ck.extreme_pu = traj.extreme();
        ck.steady_pu = traj.final_omega();
        ck.extreme_hz = ck.extreme_pu * f0;
        ck.steady_hz = ck.steady_pu * f0;
        ck.frequency_ok = ck.extreme_pu >= fl.nadir_min - tol &&
                          ck.extreme_pu <= fl.nadir_max + tol &&
                          ck.steady_pu >= fl.ss_min - tol && ck.steady_pu <= fl.ss_max + tol;
        if (!ck.frequency_ok)
        {
            std::ostringstream os;
            os.precision(6);
            os << "frequency limits violated on island {";
            for (int id : S)
                os << " " << id;
            os << " }: extreme " << ck.extreme_hz << " Hz, steady " << ck.steady_hz
               << " Hz vs [" << fl.nadir_min * f0 << ", " << fl.nadir_max * f0 << "] / ["
               << fl.ss_min * f0 << ", " << fl.ss_max * f0 << "] Hz";
            flag(os.str());
            rep.ok = false;
        }
        rep.components.push_back(std::move(ck));
    }

    for (const Microgrid &m : c.microgrids)
    {
        for (const Bus &b : m.buses)
        {
            const double cii = sol.values[model.var(vn::c_bus(m.id, b.id))];
            if (cii < b.v_min * b.v_min - tol || cii > b.v_max * b.v_max + tol)
                flag("squared voltage out of box at " + std::to_string(m.id) + ":" + b.id);
        }
        for (std::size_t li = 0; li < m.lines.size(); ++li)
        {
            const double loss = sol.values[model.var(vn::f_p(m.id, li, 0))] +
                                sol.values[model.var(vn::f_p(m.id, li, 1))];
            if (loss > m.lines[li].p_loss_max + tol)
                flag("loss cap exceeded on line " + std::to_string(li) + " of microgrid " +
                     std::to_string(m.id));
        }
        for (const Load &l : m.loads)
        {
            const double x = sol.values[model.var(vn::x(m.id, l.bus))];
            const double pd = sol.values[model.var(vn::p_load(m.id, l.bus))];
            const double qd = sol.values[model.var(vn::q_load(m.id, l.bus))];
            const double rho = sol.values[model.var(vn::rho(m.id, l.bus))];
            const double sig = sol.values[model.var(vn::sigma(m.id, l.bus))];
            if (std::abs(rho - x * pd) > tol || std::abs(sig - x * qd) > tol)
                flag("shed product inexact for load " + std::to_string(m.id) + ":" + l.bus);
        }
    }
    for (const LinkingLine &l : c.linking_lines)
    {
        if (sol.topology.on_edges.count(l.id) == 0)
            continue;
        const double loss = sol.values[model.var(vn::f_link_p(l.id, 0))] +
                            sol.values[model.var(vn::f_link_p(l.id, 1))];
        if (loss > l.p_loss_max + tol)
            flag("loss cap exceeded on linking line " + l.id);
    }
    return rep;
}

std::string VerifyReport::text(const NetworkCase &c) const
{
    const double f0 = c.bases.f_nominal_hz;
    const FrequencyLimits &fl = c.frequency_limits;
    std::ostringstream os;
    os.precision(6);
    os << "islands " << components.size() << "\n";
    for (const ComponentCheck &ck : components)
    {
        os << "  {";
        for (int id : ck.component)
            os << " " << id;
        os << " } mismatch " << ck.mismatch_pu << " pu, extreme " << ck.extreme_pu << " pu ("
           << ck.extreme_hz << " Hz), steady " << ck.steady_pu << " pu (" << ck.steady_hz
           << " Hz) " << (ck.frequency_ok ? "ok" : "VIOLATION") << "\n";
    }
    os << "limits: nadir [" << fl.nadir_min << ", " << fl.nadir_max << "] pu (["
       << fl.nadir_min * f0 << ", " << fl.nadir_max * f0 << "] Hz), steady-state [" << fl.ss_min
       << ", " << fl.ss_max << "] pu ([" << fl.ss_min * f0 << ", " << fl.ss_max * f0
       << "] Hz)\n";
    for (const std::string &v : violations)
        os << "violation: " << v << "\n";
    os << (ok ? "verified: all checks passed" : "verified: FAILED") << "\n";
    return os.str();
}

} // namespace mmg
