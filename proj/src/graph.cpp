#include "mmg/graph.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "mmg/errors.hpp"

namespace mmg
{

std::vector<std::set<int>> connected_components(const NetworkCase &c, const SwitchConfig &sw)
{
    std::map<int, std::vector<int>> adj;
    for (const Microgrid &m : c.microgrids)
        adj[m.id];
    for (const LinkingLine &l : c.linking_lines)
        if (sw.on_edges.count(l.id))
        {
            adj[l.from_mg].push_back(l.to_mg);
            adj[l.to_mg].push_back(l.from_mg);
        }

    std::vector<std::set<int>> comps;
    std::set<int> seen;
    for (const auto &[root, _] : adj)
    {
        if (seen.count(root))
            continue;
        std::set<int> comp;
        std::queue<int> q;
        q.push(root);
        seen.insert(root);
        comp.insert(root);
        while (!q.empty())
        {
            const int u = q.front();
            q.pop();
            for (int v : adj[u])
                if (seen.insert(v).second)
                {
                    comp.insert(v);
                    q.push(v);
                }
        }
        comps.push_back(std::move(comp));
    }
    return comps;
}

std::vector<const LinkingLine *> cut_edges(const NetworkCase &c, const std::set<int> &vertex_set)
{
    std::vector<const LinkingLine *> out;
    for (const LinkingLine &l : c.linking_lines)
    {
        const bool a = vertex_set.count(l.from_mg) > 0;
        const bool b = vertex_set.count(l.to_mg) > 0;
        if (a != b)
            out.push_back(&l);
    }
    return out;
}

std::vector<const LinkingLine *> internal_edges(const NetworkCase &c, const std::set<int> &vertex_set)
{
    std::vector<const LinkingLine *> out;
    for (const LinkingLine &l : c.linking_lines)
        if (vertex_set.count(l.from_mg) && vertex_set.count(l.to_mg))
            out.push_back(&l);
    return out;
}

bool spanning_tree_feasible(const NetworkCase &c, const SwitchConfig &sw,
                            const std::set<int> &vertex_set)
{
    if (vertex_set.empty())
        throw ValidationError("spanning_tree_feasible requires a nonempty vertex set");
    for (int id : vertex_set)
        c.microgrid(id);  // throws on unknown vertex ids
    std::set<int> reached{*vertex_set.begin()};
    for (bool grew = true; grew && reached.size() < vertex_set.size();)
    {
        grew = false;
        for (const LinkingLine &l : c.linking_lines)
        {
            if (sw.on_edges.count(l.id) == 0 || vertex_set.count(l.from_mg) == 0 ||
                vertex_set.count(l.to_mg) == 0)
                continue;
            if (reached.count(l.from_mg) != reached.count(l.to_mg))
            {
                reached.insert(l.from_mg);
                reached.insert(l.to_mg);
                grew = true;
            }
        }
    }
    return reached.size() == vertex_set.size();
}

bool is_spanning_tree(const NetworkCase &c, const SwitchConfig &sw)
{
    const auto comps = connected_components(c, sw);
    return comps.size() == 1 && sw.on_edges.size() == c.microgrids.size() - 1;
}

} // namespace mmg
