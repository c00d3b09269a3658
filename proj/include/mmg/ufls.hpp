#pragma once

#include <string>
#include <vector>

#include "mmg/case.hpp"

namespace mmg
{

// One under-frequency relay stage: trips a fixed block of the microgrid's
// load when the frequency deviation stays beyond the threshold continuously
// for the intentional delay (plus measurement latency).
struct RelayStage
{
    double threshold_hz = 0.0;  // deviation magnitude below nominal [Hz]
    double fraction = 0.0;      // block size as a fraction of total load, (0, 1]
    double delay_s = 0.0;
};

// Configurable stand-in table; real deployments tune these per utility.
std::vector<RelayStage> default_relay_stages();

// Deeper, more aggressive table in the style of utility bulk-shedding
// schemes: earlier pickup and larger blocks.  Used by the comparison
// workflow as the conventional-practice reference.
std::vector<RelayStage> comparison_relay_stages();

struct ShedEvent
{
    int mg = 0;
    int stage = 0;      // index into the stage table
    double time_s = 0.0;
    double shed_kw = 0.0;
};

struct MgUflsResult
{
    int mg = 0;
    double shed_kw = 0.0;
    double nadir_hz = 0.0;   // signed extreme deviation
    double steady_hz = 0.0;  // deviation at the end of the horizon
    bool within_limits = true;
};

struct UflsOutcome
{
    std::vector<MgUflsResult> per_mg;
    std::vector<ShedEvent> events;
    double total_shed_kw = 0.0;

    std::string csv() const;  // per-microgrid summary table
};

// Event-driven relay simulation.  Every microgrid rides through the
// islanding alone with its own pre-event import as the step deficit; each
// tripped block reduces the disturbance at the trip instant, with the
// dynamic state carried over continuously.
UflsOutcome simulate_ufls(const NetworkCase &c, const std::vector<RelayStage> &stages,
                          double latency_s = 0.0, double t_end = 30.0, double dt = 5e-4);

} // namespace mmg
