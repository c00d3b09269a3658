#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "mmg/model.hpp"

namespace mmg
{

// Conic program in standard form:
//   minimize    c'x
//   subject to  A x = b,   h - G x in K
// where K is a nonnegative orthant of dimension nlp followed by second-order
// cones of the listed dimensions.
struct StandardForm
{
    Eigen::SparseMatrix<double> A, G;
    Eigen::VectorXd b, h, c;
    int n = 0;    // variables
    int p = 0;    // equality rows
    int m = 0;    // conic rows
    int nlp = 0;  // leading orthant dimension
    std::vector<int> soc_dims;
    double obj_constant = 0.0;
};

// Converts a model (with binaries treated as continuous within the given
// bounds) to standard form.  Bound arrays override the model bounds; a pinned
// variable (lower == upper) becomes an equality row so the cone keeps a
// nonempty interior.  Rotated cones ||v||^2 <= e1*e2 are carried as standard
// cones on ((e1+e2)/2, (e1-e2)/2, v); the transformation is orthogonal up to
// a uniform factor, so conditioning is preserved.
StandardForm standard_form(const ModelInstance &model, const std::vector<double> &lower,
                           const std::vector<double> &upper, bool include_cuts = true);

struct SocpSettings
{
    double feas_tol = 1e-8;
    double gap_tol = 1e-8;
    double rel_gap_tol = 1e-8;
    int max_iter = 100;
    double static_reg = 1e-8;  // quasi-definite shift applied to the KKT system
};

enum class SocpStatus
{
    optimal,
    primal_infeasible,
    dual_infeasible,
    max_iter,
    numerical
};

struct SocpResult
{
    SocpStatus status = SocpStatus::numerical;
    Eigen::VectorXd x;
    double objective = 0.0;  // includes the model constant
    int iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double gap = 0.0;
};

// Homogeneous self-dual primal-dual interior-point method with
// Nesterov-Todd scaling and a Mehrotra predictor-corrector step.
SocpResult solve_standard(const StandardForm &sf, const SocpSettings &settings = {});

} // namespace mmg
