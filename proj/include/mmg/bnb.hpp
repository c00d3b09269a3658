#pragma once

#include <vector>

#include "mmg/model.hpp"
#include "mmg/socp.hpp"

namespace mmg
{

struct SolveSettings
{
    double feas_tol = 1e-7;
    double gap_tol = 1e-7;
    double int_tol = 1e-6;
    double mip_gap = 0.0;  // relative optimality gap at termination
    long node_limit = 200000;
    double time_limit_s = 1e30;
    bool log_nodes = false;  // one line per node to stderr
};

enum class MipStatus
{
    optimal,
    infeasible,
    node_limit,
    time_limit
};

struct SolveResult
{
    MipStatus status = MipStatus::infeasible;
    double objective = 0.0;
    std::vector<double> values;
    double bound = 0.0;  // global lower bound at termination
    double gap = 0.0;
    long nodes = 0;
    double wall_time_s = 0.0;
};

// Continuous relaxation of the model (binaries relaxed to [0,1]).
SocpResult solve_socp(const ModelInstance &model, const SocpSettings &settings = {});

// Best-first branch-and-bound (depth-first plunge until the first incumbent)
// over the binary variables; branching picks the most fractional binary,
// ties broken by lowest variable index.  Deterministic.
SolveResult solve_misocp(const ModelInstance &model, const SolveSettings &settings = {});

} // namespace mmg
