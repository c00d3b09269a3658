#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mmg
{

/// Per-unit bases shared by the whole case.
struct BaseValues
{
    double s_base_kw = 0.0;    ///< common power base [kW]
    double v_base_kv = 0.0;    ///< voltage base [kV]
    double f_nominal_hz = 50.0;
};

struct Bus
{
    std::string id;
    int microgrid = 0;
    double v_min = 0.0; ///< [pu]
    double v_max = 0.0; ///< [pu]
    bool is_boundary = false;
};

/// Distribution line inside a microgrid (series admittance model).
struct Line
{
    std::string from_bus;
    std::string to_bus;
    double g = 0.0;          ///< conductance [pu]
    double b = 0.0;          ///< susceptance [pu]
    double p_loss_max = 0.0; ///< cap on f_ij + f_ji [pu]
};

/// Switchable line of the linking grid, joining two microgrids.
struct LinkingLine
{
    std::string id;
    int from_mg = 0;
    int to_mg = 0;
    double g = 0.0;
    double b = 0.0;
    double p_flow_max = 0.0;
    double q_flow_max = 0.0;
    double p_loss_max = 0.0;
    std::optional<double> big_m_p; ///< defaults to 2 vmax^2 (|g|+|b|) when absent
    std::optional<double> big_m_q;
};

struct Der
{
    std::string id;
    std::string bus;
    double p_min = 0.0, p_max = 0.0; ///< [pu]
    double q_min = 0.0, q_max = 0.0;
    double ramp_up = 0.0;   ///< [pu per dispatch interval]
    double ramp_down = 0.0;
    double p_initial = 0.0;
};

/// ZIP fractions: constant impedance, constant current, constant power.
struct ZipTriple
{
    double z = 0.0;
    double i = 0.0;
    double p = 1.0;
};

struct Load
{
    std::string bus;
    double p_bar = 0.0; ///< pre-islanding active demand [pu]
    double q_bar = 0.0;
    ZipTriple zip_p;
    ZipTriple zip_q;
    double voll = 0.0; ///< cost per pu shed
};

/// Dynamic parameters of the VSC interface of one microgrid.
struct VscDynamics
{
    double inertia = 0.0; ///< H [s]
    double droop = 0.0;   ///< R [pu]
    double t_lead = 0.0;  ///< T [s]
    double t_lag = 0.0;   ///< T' [s], identical across microgrids
};

struct Microgrid
{
    int id = 0;
    std::vector<Bus> buses;
    std::vector<Line> lines;
    std::vector<Der> ders;
    std::vector<Load> loads;
    std::string boundary_bus;
    VscDynamics dynamics;
    double delta_p0 = 0.0; ///< pre-islanding import from the linking grid [pu], positive = import
    double delta_q0 = 0.0;

    const Bus &bus(const std::string &bus_id) const;
    double total_p_load() const;
};

/// Frequency-security limits, stored in pu deviation (converted from Hz on load).
struct FrequencyLimits
{
    double nadir_min = 0.0; ///< <= 0
    double nadir_max = 0.0; ///< >= 0
    double ss_min = 0.0;
    double ss_max = 0.0;
    std::optional<double> big_m_nadir; ///< auto-sized when absent
    std::optional<double> big_m_ss;
};

/// Immutable problem instance. Safe to share across threads after load.
struct NetworkCase
{
    std::string name;
    std::string note;
    BaseValues bases;
    std::vector<Microgrid> microgrids;
    std::vector<LinkingLine> linking_lines;
    double damping = 0.0;  ///< D, shared frequency-dependence of loads [pu]
    FrequencyLimits frequency_limits;
    double severity = 0.0; ///< pre-islanding main-grid import [pu]

    const Microgrid &microgrid(int id) const;
    const LinkingLine &linking_line(const std::string &id) const;
    std::vector<int> microgrid_ids() const;
    double total_p_load() const;

    /// Scales every delta_p0 (and severity) to the requested severity [pu].
    void rescale_severity(double new_severity);

    void validate() const;
};

/// Linking-grid switch state: ids of closed linking lines.
struct SwitchConfig
{
    std::set<std::string> on_edges;
};

NetworkCase load_case(const std::string &path);
NetworkCase parse_case(const std::string &json_text);
std::string serialize_case(const NetworkCase &c);

} // namespace mmg
