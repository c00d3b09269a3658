#pragma once

#include <map>
#include <string>
#include <vector>

#include "mmg/case.hpp"

namespace mmg
{

enum class VarKind
{
    continuous,
    binary
};

struct Variable
{
    std::string name;
    VarKind kind = VarKind::continuous;
    double lower = 0.0;
    double upper = 0.0;
};

struct LinTerm
{
    int var = -1;
    double coef = 0.0;
};

enum class Sense
{
    le,
    eq,
    ge
};

struct LinearConstraint
{
    std::string name;
    std::vector<LinTerm> terms;
    Sense sense = Sense::le;
    double rhs = 0.0;
};

struct AffExpr
{
    std::vector<LinTerm> terms;
    double constant = 0.0;
};

// Rotated second-order cone membership  ||vec||^2 <= e1 * e2, with e1 and e2
// affine expressions that are nonnegative over the variable bounds.  A plain
// second-order cone ||vec|| <= e is expressed with e1 = e2 = e.
struct ConeConstraint
{
    std::string name;
    AffExpr e1, e2;
    std::vector<AffExpr> vec;
};

struct ModelInstance
{
    std::vector<Variable> vars;
    std::vector<LinearConstraint> linear;
    std::vector<ConeConstraint> cones;
    std::vector<double> objective;  // linear, minimize
    double objective_constant = 0.0;
    std::vector<LinearConstraint> cut_pool;  // append-only

    std::map<std::string, int> index;

    int add_var(const std::string &name, VarKind kind, double lower, double upper);
    int var(const std::string &name) const;                // throws on unknown name
    bool has_var(const std::string &name) const { return index.count(name) > 0; }
    void add_linear(LinearConstraint c) { linear.push_back(std::move(c)); }
    void add_cone(ConeConstraint c) { cones.push_back(std::move(c)); }
    void set_objective(int var, double coef);

    std::size_t num_binaries() const;
    double eval_objective(const std::vector<double> &values) const;
};

struct Solution
{
    std::vector<double> values;
    double objective = 0.0;

    double value(const ModelInstance &m, const std::string &name) const;

    // derived report fields filled by extract_solution
    SwitchConfig topology;
    std::map<std::string, int> load_status;      // "m:bus" -> 0/1
    std::map<std::string, double> der_dispatch;  // DER id -> p (pu)
    double curtailment_pu = 0.0;
    std::map<int, double> curtailment_by_mg;     // pu
};

double eval_expr(const AffExpr &e, const std::vector<double> &values);
double eval_row(const LinearConstraint &c, const std::vector<double> &values);  // lhs - rhs

} // namespace mmg
