#pragma once

#include <set>
#include <vector>

#include "mmg/case.hpp"

namespace mmg
{

// Aggregate frequency-response parameters of a group of grid-forming units
// sharing a common lag time constant.  Inertias and droop gains add; the
// lead-term gain k is the droop-weighted sum of lead time constants.
struct SfrAggregate
{
    double inertia = 0.0;    // sum of inertia constants H_m [s]
    double inv_droop = 0.0;  // sum of 1/R_m
    double lead_gain = 0.0;  // sum of T_lead,m / R_m [s]
    double t_lag = 0.0;      // common lag time constant [s]
    double damping = 0.0;    // load damping D
};

enum class DampingRegime
{
    under,
    critical,
    over
};

// Closed-form response coefficients of the second-order aggregate model.
// alpha maps a step power imbalance to the extreme frequency excursion,
// beta to the steady-state offset (both in pu frequency per pu power).
struct SfrShape
{
    double omega_n = 0.0;
    double zeta = 0.0;
    double omega_r = 0.0;  // damped frequency; meaningful only when underdamped
    double t_peak = 0.0;   // time of the frequency extreme [s]; 0 when not underdamped
    double alpha = 0.0;
    double beta = 0.0;
    DampingRegime regime = DampingRegime::under;

    bool underdamped() const { return regime == DampingRegime::under; }
};

SfrAggregate aggregate_dynamics(const std::vector<VscDynamics> &units, double damping);

// Aggregate over a subset of the case's microgrids (an island).
SfrAggregate aggregate_for(const NetworkCase &c, const std::set<int> &mg_ids);

SfrShape response_shape(const SfrAggregate &a);

// Time-domain simulation of the aggregate model under a step imbalance
// delta_p (pu, surplus positive).  Fixed-step RK4.
struct SfrTrajectory
{
    double dt = 0.0;
    std::vector<double> omega;     // frequency deviation [pu]
    std::vector<double> governor;  // internal governor state

    // Signed largest-magnitude deviation and its time, with a parabolic
    // refinement through the three samples bracketing the discrete extreme.
    double extreme() const;
    double extreme_time() const;
    double final_omega() const { return omega.back(); }
};

SfrTrajectory simulate_step(const SfrAggregate &a, double delta_p, double t_end, double dt);

// One RK4 step of the aggregate model, advancing the frequency deviation w
// and governor state z in place.  Exposed so event-driven simulations can
// integrate with the exact same arithmetic as simulate_step.
void sfr_rk4_step(const SfrAggregate &a, double delta_p, double dt, double &w, double &z);

// Nadir and steady-state coefficients (alpha_S, beta_S) of an island made of
// the given microgrids.
std::pair<double, double> component_coefficients(const NetworkCase &c, const std::set<int> &mg_ids);

} // namespace mmg
