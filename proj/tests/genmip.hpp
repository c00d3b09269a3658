#pragma once

#include <random>
#include <string>
#include <vector>

#include "mmg/bnb.hpp"
#include "mmg/model.hpp"
#include "mmg/socp.hpp"

namespace mmgtest
{

// Random small mixed-integer SOCP with a bounded feasible region: binaries,
// a few box-bounded continuous variables, random linear rows kept feasible
// at the origin, and a couple of norm cones.
inline mmg::ModelInstance random_misocp(std::mt19937 &rng, int n_bin, int n_cont = 2)
{
    using namespace mmg;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> upos(0.2, 1.0);

    ModelInstance m;
    std::vector<int> bin, cont;
    for (int i = 0; i < n_bin; ++i)
        bin.push_back(m.add_var("b" + std::to_string(i), VarKind::binary, 0, 1));
    for (int i = 0; i < n_cont; ++i)
        cont.push_back(m.add_var("y" + std::to_string(i), VarKind::continuous, 0, 2));

    for (int i : bin)
        m.set_objective(i, u(rng));
    for (int i : cont)
        m.set_objective(i, u(rng));

    const int rows = 2 + static_cast<int>(rng() % 3);
    for (int r = 0; r < rows; ++r)
    {
        LinearConstraint row;
        row.name = "r" + std::to_string(r);
        for (int i : bin)
            if (rng() % 2)
                row.terms.push_back({i, u(rng)});
        for (int i : cont)
            row.terms.push_back({i, u(rng)});
        if (row.terms.empty())
            row.terms.push_back({bin[0], 1.0});
        row.sense = Sense::le;
        row.rhs = upos(rng) + 0.5 * n_bin * 0.5;
        m.add_linear(std::move(row));
    }

    // || (y0 - a, b0 + ... scaled) || <= t with t a fresh bounded variable
    const int t = m.add_var("t", VarKind::continuous, 0, 3);
    m.set_objective(t, 0.3 * std::abs(u(rng)));
    ConeConstraint cone;
    cone.e1 = {{{t, 1.0}}, 0.0};
    cone.e2 = cone.e1;
    cone.vec = {{{{cont[0], 1.0}}, -upos(rng)},
                {{{bin[0], 0.5}, {cont[1 % n_cont], 0.7}}, -upos(rng)}};
    m.add_cone(std::move(cone));
    return m;
}

// Exhaustive optimum over all binary assignments; returns true when at least
// one assignment is feasible.
inline bool enumerate_optimum(const mmg::ModelInstance &m, double &best)
{
    using namespace mmg;
    std::vector<int> bin;
    std::vector<double> lo, hi;
    for (std::size_t i = 0; i < m.vars.size(); ++i)
    {
        lo.push_back(m.vars[i].lower);
        hi.push_back(m.vars[i].upper);
        if (m.vars[i].kind == VarKind::binary)
            bin.push_back(static_cast<int>(i));
    }
    bool any = false;
    best = 1e300;
    for (unsigned long mask = 0; mask < (1ul << bin.size()); ++mask)
    {
        for (std::size_t k = 0; k < bin.size(); ++k)
            lo[bin[k]] = hi[bin[k]] = (mask >> k) & 1 ? 1.0 : 0.0;
        SocpResult r = solve_standard(standard_form(m, lo, hi));
        if (r.status == SocpStatus::optimal && r.objective < best)
        {
            best = r.objective;
            any = true;
        }
    }
    return any;
}

} // namespace mmgtest
