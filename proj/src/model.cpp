#include "mmg/model.hpp"

#include <cmath>

#include "mmg/errors.hpp"

namespace mmg
{

int ModelInstance::add_var(const std::string &name, VarKind kind, double lower, double upper)
{
    if (index.count(name))
        throw ValidationError("duplicate variable name '" + name + "'");
    if (!(lower <= upper))
        throw ValidationError("variable '" + name + "': lower bound exceeds upper bound");
    const int id = static_cast<int>(vars.size());
    vars.push_back({name, kind, lower, upper});
    objective.push_back(0.0);
    index.emplace(name, id);
    return id;
}

int ModelInstance::var(const std::string &name) const
{
    auto it = index.find(name);
    if (it == index.end())
        throw ValidationError("unknown variable name '" + name + "'");
    return it->second;
}

void ModelInstance::set_objective(int var_id, double coef)
{
    objective.at(var_id) = coef;
}

std::size_t ModelInstance::num_binaries() const
{
    std::size_t n = 0;
    for (const Variable &v : vars)
        if (v.kind == VarKind::binary)
            ++n;
    return n;
}

double ModelInstance::eval_objective(const std::vector<double> &values) const
{
    double obj = objective_constant;
    for (std::size_t i = 0; i < vars.size(); ++i)
        obj += objective[i] * values[i];
    return obj;
}

double Solution::value(const ModelInstance &m, const std::string &name) const
{
    return values.at(static_cast<std::size_t>(m.var(name)));
}

double eval_expr(const AffExpr &e, const std::vector<double> &values)
{
    double v = e.constant;
    for (const LinTerm &t : e.terms)
        v += t.coef * values[static_cast<std::size_t>(t.var)];
    return v;
}

double eval_row(const LinearConstraint &c, const std::vector<double> &values)
{
    double v = -c.rhs;
    for (const LinTerm &t : c.terms)
        v += t.coef * values[static_cast<std::size_t>(t.var)];
    return v;
}

} // namespace mmg
