#pragma once

#include <set>
#include <string>

#include "mmg/case.hpp"
#include "mmg/model.hpp"

namespace mmg
{

// Variable naming scheme shared by the builder, solution extraction, and
// tests.  m is the microgrid id, bus a bus id, l the line position within its
// microgrid, dir 0 for the stored orientation and 1 for the reverse.
namespace vn
{
std::string x(int m, const std::string &bus);
std::string rho(int m, const std::string &bus);
std::string sigma(int m, const std::string &bus);
std::string p_load(int m, const std::string &bus);
std::string q_load(int m, const std::string &bus);
std::string c_bus(int m, const std::string &bus);        // squared voltage C_ii
std::string c_line(int m, std::size_t l);                // C_ij
std::string s_line(int m, std::size_t l);                // S_ij
std::string f_p(int m, std::size_t l, int dir);
std::string f_q(int m, std::size_t l, int dir);
std::string p_gen(const std::string &der_id);
std::string q_gen(const std::string &der_id);
std::string exch_p(int m);                               // boundary exchange
std::string exch_q(int m);
std::string c_link_node(int m);                          // linking-grid C~_mm
std::string c_link(const std::string &line_id);          // C~_mk
std::string s_link(const std::string &line_id);          // S~_mk
std::string z(const std::string &line_id);               // switch state
std::string f_link_p(const std::string &line_id, int dir);
std::string f_link_q(const std::string &line_id, int dir);
} // namespace vn

// Voltage-dependent demand range of a load over a squared-voltage box
// [c_min, c_max]; the ZIP curve is nondecreasing in C for nonnegative
// coefficients, so the extremes sit at the box ends.
struct ZipBox
{
    double p_min = 0.0, p_max = 0.0, q_min = 0.0, q_max = 0.0;
};

ZipBox zip_bounds(const Load &load, double c_min, double c_max);

enum class CutKind
{
    nadir_min,
    nadir_max,
    ss_min,
    ss_max
};

std::string cut_kind_name(CutKind k);

// Assembles the full mixed-integer SOCP relaxation without any frequency
// cuts: shedding objective, linearized balances, cone-relaxed power flow,
// switched linking-grid flow, ZIP demand relaxation with tightening
// hyperplanes, and the big-M product linearization.
ModelInstance build_base_model(const NetworkCase &c);

// One frequency-security cutting plane for the island candidate S.  The cut
// deactivates when a supporting internal edge opens or a boundary edge
// closes; `support` defaults to every internal edge of S.  Passing a
// spanning tree of S instead yields a strictly stronger, still valid cut:
// it stays active on any island that keeps those tree edges closed,
// regardless of the state of the remaining chords.
LinearConstraint frequency_cut(const NetworkCase &c, const ModelInstance &model,
                               const std::set<int> &S, CutKind kind,
                               const std::set<std::string> *support = nullptr);

Solution extract_solution(const NetworkCase &c, const ModelInstance &model,
                          const std::vector<double> &raw);

// Counts of every variable and constraint family, for auditing against the
// closed-form census formulas in the docs.
std::string model_census(const NetworkCase &c, const ModelInstance &model);

// Plain-text dump of the full conic program (see docs/model-dump.md).
std::string dump_model(const ModelInstance &model);

} // namespace mmg
