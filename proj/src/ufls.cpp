#include "mmg/ufls.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mmg/errors.hpp"
#include "mmg/sfr.hpp"

namespace mmg
{

std::vector<RelayStage> default_relay_stages()
{
    return {{0.3, 0.10, 0.1}, {0.5, 0.10, 0.1}, {0.7, 0.10, 0.1}, {0.9, 0.10, 0.1}};
}

std::vector<RelayStage> comparison_relay_stages()
{
    return {{0.1, 0.20, 0.1},
            {0.2, 0.20, 0.1},
            {0.3, 0.20, 0.1},
            {0.4, 0.20, 0.1},
            {0.5, 0.20, 0.1}};
}

namespace
{

void check_stages(const std::vector<RelayStage> &stages)
{
    double prev = 0.0;
    for (const RelayStage &s : stages)
    {
        if (!(s.threshold_hz > prev))
            throw ValidationError("relay thresholds must be positive and strictly increasing");
        if (!(s.fraction > 0.0 && s.fraction <= 1.0))
            throw ValidationError("relay block fractions must lie in (0, 1]");
        if (s.delay_s < 0.0)
            throw ValidationError("relay delays must be nonnegative");
        prev = s.threshold_hz;
    }
}

} // namespace

UflsOutcome simulate_ufls(const NetworkCase &c, const std::vector<RelayStage> &stages,
                          double latency_s, double t_end, double dt)
{
    check_stages(stages);
    if (latency_s < 0.0 || t_end <= 0.0 || dt <= 0.0)
        throw ValidationError("latency, horizon, and step must be nonnegative/positive");
    const double f0 = c.bases.f_nominal_hz;
    const FrequencyLimits &fl = c.frequency_limits;

    UflsOutcome out;
    for (const Microgrid &m : c.microgrids)
    {
        const SfrAggregate agg = aggregate_dynamics({m.dynamics}, c.damping);
        double total_load = 0.0;
        for (const Load &l : m.loads)
            total_load += l.p_bar;

        double dp = -m.delta_p0;
        double shed = 0.0;
        double w = 0.0, z = 0.0;
        double nadir = 0.0;
        std::vector<double> held(stages.size(), 0.0);  // continuous exceedance time
        std::vector<bool> tripped(stages.size(), false);

        const long steps = static_cast<long>(std::ceil(t_end / dt));
        for (long i = 0; i < steps; ++i)
        {
            sfr_rk4_step(agg, dp, dt, w, z);
            if (!std::isfinite(w) || !std::isfinite(z))
                throw SolverError("relay simulation diverged for microgrid " +
                                  std::to_string(m.id));
            if (std::abs(w) > std::abs(nadir))
                nadir = w;
            const double dev_hz = w * f0;
            for (std::size_t s = 0; s < stages.size(); ++s)
            {
                if (tripped[s])
                    continue;
                if (dev_hz <= -stages[s].threshold_hz)
                    held[s] += dt;
                else
                    held[s] = 0.0;
                if (held[s] >= stages[s].delay_s + latency_s)
                {
                    tripped[s] = true;
                    const double block =
                        std::min(stages[s].fraction * total_load, total_load - shed);
                    shed += block;
                    dp += block;  // disturbance relief, state carried over
                    out.events.push_back({m.id, static_cast<int>(s),
                                          static_cast<double>(i + 1) * dt,
                                          block * c.bases.s_base_kw});
                }
            }
        }

        MgUflsResult r;
        r.mg = m.id;
        r.shed_kw = shed * c.bases.s_base_kw;
        r.nadir_hz = nadir * f0;
        r.steady_hz = w * f0;
        r.within_limits = nadir >= fl.nadir_min - 1e-9 && nadir <= fl.nadir_max + 1e-9 &&
                          w >= fl.ss_min - 1e-9 && w <= fl.ss_max + 1e-9;
        out.total_shed_kw += r.shed_kw;
        out.per_mg.push_back(r);
    }
    std::sort(out.events.begin(), out.events.end(),
              [](const ShedEvent &a, const ShedEvent &b) {
                  return a.time_s != b.time_s ? a.time_s < b.time_s : a.mg < b.mg;
              });
    return out;
}

std::string UflsOutcome::csv() const
{
    std::ostringstream os;
    os.precision(10);
    os << "mg,shed_kw,nadir_hz,steady_hz,within_limits\n";
    for (const MgUflsResult &r : per_mg)
        os << r.mg << "," << r.shed_kw << "," << r.nadir_hz << "," << r.steady_hz << ","
           << (r.within_limits ? 1 : 0) << "\n";
    return os.str();
}

} // namespace mmg
