#include "mmg/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <list>

#include "mmg/errors.hpp"

namespace mmg
{

namespace
{

std::vector<double> model_lowers(const ModelInstance &m)
{
    std::vector<double> v;
    v.reserve(m.vars.size());
    for (const Variable &x : m.vars)
        v.push_back(x.lower);
    return v;
}

std::vector<double> model_uppers(const ModelInstance &m)
{
    std::vector<double> v;
    v.reserve(m.vars.size());
    for (const Variable &x : m.vars)
        v.push_back(x.upper);
    return v;
}

} // namespace

SocpResult solve_socp(const ModelInstance &model, const SocpSettings &settings)
{
    return solve_standard(standard_form(model, model_lowers(model), model_uppers(model)), settings);
}

SolveResult solve_misocp(const ModelInstance &model, const SolveSettings &settings)
{
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    std::vector<int> binaries;
    for (std::size_t i = 0; i < model.vars.size(); ++i)
        if (model.vars[i].kind == VarKind::binary)
            binaries.push_back(static_cast<int>(i));

    SocpSettings node_settings;
    node_settings.feas_tol = std::min(settings.feas_tol, 1e-8);
    node_settings.gap_tol = std::min(settings.gap_tol, 1e-8);
    node_settings.rel_gap_tol = node_settings.gap_tol;

    struct Node
    {
        long id;
        int depth;
        double bound;  // parent relaxation objective
        std::vector<double> lo, hi;
    };

    SolveResult res;
    const double inf = std::numeric_limits<double>::infinity();
    double incumbent = inf;
    std::vector<double> incumbent_values;
    long next_id = 0;
    std::list<Node> open;
    open.push_back({next_id++, 0, -inf, model_lowers(model), model_uppers(model)});

    auto pick = [&]() {
        // depth-first plunge until an incumbent exists, then best-first
        auto best = open.begin();
        for (auto it = open.begin(); it != open.end(); ++it)
        {
            if (incumbent == inf ? (it->id > best->id)
                                 : (it->bound < best->bound ||
                                    (it->bound == best->bound && it->id < best->id)))
                best = it;
        }
        return best;
    };

    bool hit_node_limit = false, hit_time_limit = false;
    while (!open.empty())
    {
        if (res.nodes >= settings.node_limit)
        {
            hit_node_limit = true;
            break;
        }
        if (elapsed() > settings.time_limit_s)
        {
            hit_time_limit = true;
            break;
        }

        auto it = pick();
        Node node = std::move(*it);
        open.erase(it);

        const double prune_tol =
            settings.mip_gap * std::max(1.0, std::abs(incumbent)) + 1e-9 * std::max(1.0, std::abs(incumbent));
        if (node.bound >= incumbent - prune_tol)
            continue;

        ++res.nodes;
        SocpResult rel = solve_standard(standard_form(model, node.lo, node.hi), node_settings);
        if (rel.status != SocpStatus::optimal && rel.status != SocpStatus::primal_infeasible)
        {
            // numerically degenerate node: one retry with heavier regularization
            SocpSettings retry = node_settings;
            retry.max_iter = 2 * node_settings.max_iter;
            retry.static_reg = 1e-6;
            rel = solve_standard(standard_form(model, node.lo, node.hi), retry);
        }

        if (settings.log_nodes)
            std::cerr << "node " << node.id << " depth " << node.depth << " status "
                      << static_cast<int>(rel.status) << " obj " << rel.objective << " inc "
                      << (incumbent == inf ? 0.0 : incumbent) << "\n";

        if (rel.status == SocpStatus::primal_infeasible)
            continue;
        if (rel.status != SocpStatus::optimal)
        {
            // Numerically intractable relaxation (typically a marginally
            // infeasible subproblem).  Branch on the next free binary with the
            // parent bound: the more constrained children either solve cleanly
            // or produce a clean infeasibility certificate, so no subtree is
            // pruned on numerical evidence alone.
            int free_var = -1;
            for (int b : binaries)
                if (node.lo[static_cast<std::size_t>(b)] < 0.5 &&
                    node.hi[static_cast<std::size_t>(b)] > 0.5)
                {
                    free_var = b;
                    break;
                }
            if (free_var < 0)
                continue;  // fully fixed and still degenerate: no usable point here
            for (double fix : {0.0, 1.0})
            {
                Node child{next_id++, node.depth + 1, node.bound, node.lo, node.hi};
                child.lo[static_cast<std::size_t>(free_var)] = fix;
                child.hi[static_cast<std::size_t>(free_var)] = fix;
                open.push_back(std::move(child));
            }
            continue;
        }

        if (rel.objective >= incumbent - prune_tol)
            continue;

        // most fractional binary
        int branch_var = -1;
        double worst = settings.int_tol;
        for (int b : binaries)
        {
            const double v = rel.x[b];
            const double frac = std::abs(v - std::round(v));
            if (frac > worst)
            {
                worst = frac;
                branch_var = b;
            }
        }

        if (branch_var < 0)
        {
            // integral: candidate incumbent
            if (rel.objective < incumbent)
            {
                incumbent = rel.objective;
                incumbent_values.assign(rel.x.data(), rel.x.data() + rel.x.size());
                for (int b : binaries)
                    incumbent_values[static_cast<std::size_t>(b)] =
                        std::round(incumbent_values[static_cast<std::size_t>(b)]);
            }
            continue;
        }

        for (double fix : {0.0, 1.0})
        {
            Node child{next_id++, node.depth + 1, rel.objective, node.lo, node.hi};
            child.lo[static_cast<std::size_t>(branch_var)] = fix;
            child.hi[static_cast<std::size_t>(branch_var)] = fix;
            open.push_back(std::move(child));
        }
    }

    double open_bound = inf;
    for (const Node &n : open)
        open_bound = std::min(open_bound, n.bound);

    res.wall_time_s = elapsed();
    if (incumbent < inf)
    {
        res.objective = incumbent;
        res.values = incumbent_values;
        res.bound = open.empty() ? incumbent : std::min(open_bound, incumbent);
        res.gap = (incumbent - res.bound) / std::max(1.0, std::abs(incumbent));
        res.status = hit_node_limit ? MipStatus::node_limit
                     : hit_time_limit ? MipStatus::time_limit
                                      : MipStatus::optimal;
    }
    else
    {
        res.status = hit_node_limit ? MipStatus::node_limit
                     : hit_time_limit ? MipStatus::time_limit
                                      : MipStatus::infeasible;
        res.bound = open.empty() ? inf : open_bound;
    }
    return res;
}

} // namespace mmg
