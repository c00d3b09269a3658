#include "mmg/sfr.hpp"

#include <cmath>
#include <cstddef>

#include "mmg/errors.hpp"

namespace mmg
{

SfrAggregate aggregate_dynamics(const std::vector<VscDynamics> &units, double damping)
{
    if (units.empty())
        throw ValidationError("cannot aggregate an empty unit set");
    SfrAggregate a;
    a.t_lag = units.front().t_lag;
    a.damping = damping;
    for (const VscDynamics &u : units)
    {
        if (std::abs(u.t_lag - a.t_lag) > 1e-12)
            throw ValidationError("aggregation requires a common lag time constant");
        a.inertia += u.inertia;
        a.inv_droop += 1.0 / u.droop;
        a.lead_gain += u.t_lead / u.droop;
    }
    // the overshoot radicand T' - K/(1/R) must stay positive for the peak
    // formula to be real-valued
    if (a.t_lag - a.lead_gain / a.inv_droop <= 0.0)
        throw ValidationError("lead gain too large relative to the lag time constant");
    return a;
}

SfrAggregate aggregate_for(const NetworkCase &c, const std::set<int> &mg_ids)
{
    std::vector<VscDynamics> units;
    for (int id : mg_ids)
        units.push_back(c.microgrid(id).dynamics);
    return aggregate_dynamics(units, c.damping);
}

SfrShape response_shape(const SfrAggregate &a)
{
    const double H = a.inertia;
    const double D = a.damping;
    const double T = a.t_lag;
    const double inv_r = a.inv_droop;
    const double k = a.lead_gain;
    const double r = 1.0 / inv_r;
    const double gain = D + inv_r;

    SfrShape s;
    s.beta = 1.0 / gain;
    s.omega_n = std::sqrt(gain / (2.0 * H * T));
    s.zeta = (2.0 * H + T * D + k) / (2.0 * std::sqrt(2.0 * H * T * gain));

    constexpr double eps = 1e-9;
    if (s.zeta < 1.0 - eps)
        s.regime = DampingRegime::under;
    else if (s.zeta <= 1.0 + eps)
        s.regime = DampingRegime::critical;
    else
        s.regime = DampingRegime::over;

    if (!s.underdamped())
    {
        // critically or over-damped: no overshoot, the extreme is the
        // steady-state value approached asymptotically
        s.t_peak = 0.0;
        s.alpha = s.beta;
        return s;
    }

    const double wr = s.omega_n * std::sqrt(1.0 - s.zeta * s.zeta);
    s.omega_r = wr;
    const double zw = s.zeta * s.omega_n;
    const double zwT = zw * T;
    if (zwT < 1.0)
        s.t_peak = (M_PI - std::atan(wr * T / (1.0 - zwT))) / wr;
    else if (zwT > 1.0)
        s.t_peak = std::atan(wr * T / (zwT - 1.0)) / wr;
    else
        s.t_peak = M_PI / (2.0 * wr);

    const double overshoot = std::sqrt((T - r * k) / (2.0 * H * r));
    s.alpha = s.beta * (1.0 + overshoot * std::exp(-zw * s.t_peak));
    return s;
}

namespace
{

// Aggregate model dynamics with governor lead-lag split into a direct
// feed-through k/T and a first-order state z:
//   2H dw/dt = dp - D w - (k/T) w - z
//   T  dz/dt = -z + (1/R - k/T) w
struct Deriv
{
    double dw, dz;
};

Deriv rhs(const SfrAggregate &a, double delta_p, double w, double z)
{
    const double kT = a.lead_gain / a.t_lag;
    Deriv d;
    d.dw = (delta_p - a.damping * w - kT * w - z) / (2.0 * a.inertia);
    d.dz = (-z + (a.inv_droop - kT) * w) / a.t_lag;
    return d;
}

} // namespace

void sfr_rk4_step(const SfrAggregate &a, double delta_p, double dt, double &w, double &z)
{
    const Deriv k1 = rhs(a, delta_p, w, z);
    const Deriv k2 = rhs(a, delta_p, w + 0.5 * dt * k1.dw, z + 0.5 * dt * k1.dz);
    const Deriv k3 = rhs(a, delta_p, w + 0.5 * dt * k2.dw, z + 0.5 * dt * k2.dz);
    const Deriv k4 = rhs(a, delta_p, w + dt * k3.dw, z + dt * k3.dz);
    w += dt / 6.0 * (k1.dw + 2.0 * k2.dw + 2.0 * k3.dw + k4.dw);
    z += dt / 6.0 * (k1.dz + 2.0 * k2.dz + 2.0 * k3.dz + k4.dz);
}

SfrTrajectory simulate_step(const SfrAggregate &a, double delta_p, double t_end, double dt)
{
    if (dt <= 0 || t_end <= 0)
        throw ValidationError("simulation horizon and step must be positive");

    const std::size_t n = static_cast<std::size_t>(std::ceil(t_end / dt)) + 1;
    SfrTrajectory tr;
    tr.dt = dt;
    tr.omega.reserve(n);
    tr.governor.reserve(n);

    double w = 0.0, z = 0.0;
    tr.omega.push_back(w);
    tr.governor.push_back(z);
    for (std::size_t i = 1; i < n; ++i)
    {
        sfr_rk4_step(a, delta_p, dt, w, z);
        tr.omega.push_back(w);
        tr.governor.push_back(z);
    }
    return tr;
}

namespace
{

// Vertex of the parabola through the three samples around the discrete
// extreme; removes the O(dt) bias of the sampled peak location and value.
struct Refined
{
    double t, w;
};

Refined refine_extreme(const std::vector<double> &omega, double dt)
{
    std::size_t arg = 0;
    for (std::size_t i = 0; i < omega.size(); ++i)
        if (std::abs(omega[i]) > std::abs(omega[arg]))
            arg = i;
    if (arg == 0 || arg + 1 == omega.size())
        return {static_cast<double>(arg) * dt, omega[arg]};

    const double ym = omega[arg - 1], y0 = omega[arg], yp = omega[arg + 1];
    const double denom = ym - 2.0 * y0 + yp;
    if (std::abs(denom) < 1e-300)
        return {static_cast<double>(arg) * dt, y0};
    const double shift = 0.5 * (ym - yp) / denom;  // in units of dt, in (-1,1)
    const double w = y0 - 0.25 * (ym - yp) * shift;
    return {(static_cast<double>(arg) + shift) * dt, w};
}

} // namespace

double SfrTrajectory::extreme() const
{
    return refine_extreme(omega, dt).w;
}

double SfrTrajectory::extreme_time() const
{
    return refine_extreme(omega, dt).t;
}

std::pair<double, double> component_coefficients(const NetworkCase &c, const std::set<int> &mg_ids)
{
    const SfrShape s = response_shape(aggregate_for(c, mg_ids));
    return {s.alpha, s.beta};
}

} // namespace mmg
