#pragma once

#include <set>
#include <string>
#include <vector>

#include "mmg/bnb.hpp"
#include "mmg/builder.hpp"
#include "mmg/case.hpp"
#include "mmg/model.hpp"

namespace mmg
{

// One frequency-security cut generated by separation.  (component, kind)
// pairs are unique across the pool.
struct CutRecord
{
    std::set<int> component;
    std::set<std::string> support;  // spanning tree keeping the island connected
    CutKind kind = CutKind::nadir_min;
    double alpha = 0.0;  // extreme-excursion coefficient of the component
    double beta = 0.0;   // steady-state coefficient
    double metric = 0.0; // exact frequency metric that triggered the cut [pu]
    int iteration = 0;
};

// One row of the solve--separate trace.
struct IterationRecord
{
    int k = 0;
    double psi = 0.0;           // master objective
    int pool_size = 0;          // cuts in the pool when this solve ran
    double curtailment_pu = 0.0;
    double curtailment_kw = 0.0;
    int on_edges = 0;           // closed linking switches in the solution
    double seconds = 0.0;       // wall time of this iteration
};

// Power mismatch (pu, surplus positive) realized by an island: initial
// deficits plus shed demand of the member microgrids.
double island_mismatch(const NetworkCase &c, const ModelInstance &model,
                       const std::set<int> &mg_ids, const std::vector<double> &values);

// Exact frequency screening of an integral solution.  Partitions the
// microgrids into islands by the closed switches, evaluates the closed-form
// extreme and steady-state excursions of each, and returns a record for
// every violated bound.  Empty result means frequency-feasible.
std::vector<CutRecord> separate(const NetworkCase &c, const ModelInstance &model,
                                const Solution &sol, int iteration = 0);

struct CutLoopResult
{
    ModelInstance model;  // base model plus the final cut pool
    Solution solution;
    SolveResult mip;      // last master solve
    std::vector<CutRecord> cuts;
    std::vector<IterationRecord> trace;
};

// Master loop: solve the mixed-integer relaxation, screen the islands,
// append cuts for the violations, repeat until frequency-feasible.  The
// iteration guard defaults to four times the number of connected vertex
// subsets of the linking graph, which bounds the distinct cuts available.
CutLoopResult run_cut_loop(const NetworkCase &c, const SolveSettings &settings = {});

std::string trace_csv(const std::vector<IterationRecord> &trace);

// Independent audit of a returned strategy against the physics and the
// original (non-relaxed) constraints: time-domain frequency simulation per
// island, voltage boxes, loss caps, and exactness of the shed products.
struct ComponentCheck
{
    std::set<int> component;
    double mismatch_pu = 0.0;
    double extreme_pu = 0.0, extreme_hz = 0.0;
    double steady_pu = 0.0, steady_hz = 0.0;
    bool frequency_ok = true;
};

struct VerifyReport
{
    std::vector<ComponentCheck> components;
    std::vector<std::string> violations;
    bool ok = true;

    std::string text(const NetworkCase &c) const;
};

VerifyReport verify(const NetworkCase &c, const ModelInstance &model, const Solution &sol);

} // namespace mmg
