#include "mmg/socp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseCholesky>

#include "mmg/errors.hpp"

namespace mmg
{

using Eigen::MatrixXd;
using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

StandardForm standard_form(const ModelInstance &model, const std::vector<double> &lower,
                           const std::vector<double> &upper, bool include_cuts)
{
    const int n = static_cast<int>(model.vars.size());
    if (lower.size() != model.vars.size() || upper.size() != model.vars.size())
        throw ValidationError("bound array size mismatch");

    StandardForm sf;
    sf.n = n;
    sf.obj_constant = model.objective_constant;
    sf.c = VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
        sf.c[i] = model.objective[static_cast<std::size_t>(i)];

    std::vector<Triplet> ta, tg;
    std::vector<double> bvals, hvals;

    auto add_eq_row = [&](const std::vector<LinTerm> &terms, double rhs) {
        const int r = static_cast<int>(bvals.size());
        for (const LinTerm &t : terms)
            ta.emplace_back(r, t.var, t.coef);
        bvals.push_back(rhs);
    };
    // a row meaning  sum coef*x <= rhs  (slack in the orthant)
    auto add_le_row = [&](const std::vector<LinTerm> &terms, double rhs) {
        const int r = static_cast<int>(hvals.size());
        for (const LinTerm &t : terms)
            tg.emplace_back(r, t.var, t.coef);
        hvals.push_back(rhs);
    };

    for (int i = 0; i < n; ++i)
    {
        const double lo = lower[static_cast<std::size_t>(i)];
        const double hi = upper[static_cast<std::size_t>(i)];
        if (!(lo <= hi))
            throw ValidationError("crossed bounds on variable " + model.vars[i].name);
        if (lo == hi)
        {
            add_eq_row({{i, 1.0}}, lo);
            continue;
        }
        if (std::isfinite(hi))
            add_le_row({{i, 1.0}}, hi);
        if (std::isfinite(lo))
            add_le_row({{i, -1.0}}, -lo);
    }

    auto add_linear = [&](const LinearConstraint &row) {
        switch (row.sense)
        {
        case Sense::eq:
            add_eq_row(row.terms, row.rhs);
            break;
        case Sense::le:
            add_le_row(row.terms, row.rhs);
            break;
        case Sense::ge:
        {
            std::vector<LinTerm> neg = row.terms;
            for (LinTerm &t : neg)
                t.coef = -t.coef;
            add_le_row(neg, -row.rhs);
            break;
        }
        }
    };
    for (const LinearConstraint &row : model.linear)
        add_linear(row);
    if (include_cuts)
        for (const LinearConstraint &row : model.cut_pool)
            add_linear(row);

    sf.nlp = static_cast<int>(hvals.size());

    // rotated cone ||v||^2 <= e1*e2  ->  standard cone rows
    // ((e1+e2)/2, (e1-e2)/2, v); each row r encodes s_r = h_r - G_r x
    auto add_soc_row = [&](const AffExpr &e, double scale1, const AffExpr *e2 = nullptr,
                           double scale2 = 0.0) {
        const int r = static_cast<int>(hvals.size());
        double constant = scale1 * e.constant;
        for (const LinTerm &t : e.terms)
            tg.emplace_back(r, t.var, -scale1 * t.coef);
        if (e2)
        {
            constant += scale2 * e2->constant;
            for (const LinTerm &t : e2->terms)
                tg.emplace_back(r, t.var, -scale2 * t.coef);
        }
        hvals.push_back(constant);
    };
    for (const ConeConstraint &cc : model.cones)
    {
        add_soc_row(cc.e1, 0.5, &cc.e2, 0.5);
        add_soc_row(cc.e1, 0.5, &cc.e2, -0.5);
        for (const AffExpr &v : cc.vec)
            add_soc_row(v, 1.0);
        sf.soc_dims.push_back(static_cast<int>(cc.vec.size()) + 2);
    }

    sf.p = static_cast<int>(bvals.size());
    sf.m = static_cast<int>(hvals.size());
    sf.A.resize(sf.p, n);
    sf.A.setFromTriplets(ta.begin(), ta.end());
    sf.G.resize(sf.m, n);
    sf.G.setFromTriplets(tg.begin(), tg.end());
    sf.b = Eigen::Map<VectorXd>(bvals.data(), sf.p);
    sf.h = Eigen::Map<VectorXd>(hvals.data(), sf.m);
    return sf;
}

namespace
{

// per-cone Nesterov-Todd scaling data
struct ConeScaling
{
    VectorXd w_lp;            // orthant: w_i = sqrt(s_i/z_i)
    std::vector<MatrixXd> W;  // per SOC: scaling matrix (symmetric)
    std::vector<MatrixXd> W2; // per SOC: W^2
    VectorXd lambda;          // scaled point, full length m
};

struct ConeLayout
{
    int nlp = 0;
    std::vector<int> dims;
    std::vector<int> starts;  // start index of each SOC
    int m = 0;
    double degree = 0.0;
};

ConeLayout make_layout(const StandardForm &sf)
{
    ConeLayout lay;
    lay.nlp = sf.nlp;
    lay.dims = sf.soc_dims;
    int at = sf.nlp;
    for (int d : sf.soc_dims)
    {
        lay.starts.push_back(at);
        at += d;
    }
    lay.m = sf.m;
    lay.degree = static_cast<double>(sf.nlp + static_cast<int>(sf.soc_dims.size()));
    return lay;
}

double soc_residual(const Eigen::Ref<const VectorXd> &v)
{
    return v[0] - v.tail(v.size() - 1).norm();
}

// shifts v into the strict interior of the cone
void bring_to_cone(const ConeLayout &lay, VectorXd &v)
{
    for (int i = 0; i < lay.nlp; ++i)
        if (v[i] < 1e-8)
            v[i] = std::max(v[i], 0.0) + 1.0;
    for (std::size_t k = 0; k < lay.dims.size(); ++k)
    {
        auto seg = v.segment(lay.starts[k], lay.dims[k]);
        const double r = soc_residual(seg);
        if (r < 1e-8)
            seg[0] += 1.0 - std::min(r, 0.0);
    }
}

// conic product u o v
VectorXd conic_product(const ConeLayout &lay, const VectorXd &u, const VectorXd &v)
{
    VectorXd out(lay.m);
    for (int i = 0; i < lay.nlp; ++i)
        out[i] = u[i] * v[i];
    for (std::size_t k = 0; k < lay.dims.size(); ++k)
    {
        const int s = lay.starts[k], d = lay.dims[k];
        auto u1 = u.segment(s + 1, d - 1);
        auto v1 = v.segment(s + 1, d - 1);
        out[s] = u.segment(s, d).dot(v.segment(s, d));
        out.segment(s + 1, d - 1) = u[s] * v1 + v[s] * u1;
    }
    return out;
}

// conic division u = lambda \ v  (solves lambda o u = v)
VectorXd conic_division(const ConeLayout &lay, const VectorXd &lambda, const VectorXd &v)
{
    VectorXd out(lay.m);
    for (int i = 0; i < lay.nlp; ++i)
        out[i] = v[i] / lambda[i];
    for (std::size_t k = 0; k < lay.dims.size(); ++k)
    {
        const int s = lay.starts[k], d = lay.dims[k];
        const double l0 = lambda[s];
        auto l1 = lambda.segment(s + 1, d - 1);
        const double rho = l0 * l0 - l1.squaredNorm();
        const double u0 = (l0 * v[s] - l1.dot(v.segment(s + 1, d - 1))) / rho;
        out[s] = u0;
        out.segment(s + 1, d - 1) = (v.segment(s + 1, d - 1) - u0 * l1) / l0;
    }
    return out;
}

// identity element of the cone algebra
VectorXd cone_identity(const ConeLayout &lay)
{
    VectorXd e = VectorXd::Zero(lay.m);
    for (int i = 0; i < lay.nlp; ++i)
        e[i] = 1.0;
    for (std::size_t k = 0; k < lay.dims.size(); ++k)
        e[lay.starts[k]] = 1.0;
    return e;
}

bool update_scaling(const ConeLayout &lay, const VectorXd &s, const VectorXd &z, ConeScaling &sc)
{
    sc.w_lp.resize(lay.nlp);
    for (int i = 0; i < lay.nlp; ++i)
    {
        if (s[i] <= 0 || z[i] <= 0)
            return false;
        sc.w_lp[i] = std::sqrt(s[i] / z[i]);
    }
    sc.W.assign(lay.dims.size(), MatrixXd());
    sc.W2.assign(lay.dims.size(), MatrixXd());
    sc.lambda.resize(lay.m);
    for (int i = 0; i < lay.nlp; ++i)
        sc.lambda[i] = std::sqrt(s[i] * z[i]);

    for (std::size_t k = 0; k < lay.dims.size(); ++k)
    {
        const int st = lay.starts[k], d = lay.dims[k];
        auto sv = s.segment(st, d);
        auto zv = z.segment(st, d);
        const double sres = sv[0] * sv[0] - sv.tail(d - 1).squaredNorm();
        const double zres = zv[0] * zv[0] - zv.tail(d - 1).squaredNorm();
        if (sres <= 0 || zres <= 0 || sv[0] <= 0 || zv[0] <= 0)
            return false;
        const double snorm = std::sqrt(sres), znorm = std::sqrt(zres);
        VectorXd sb = sv / snorm, zb = zv / znorm;
        const double gamma = std::sqrt(0.5 * (1.0 + sb.dot(zb)));
        VectorXd wb(d);
        wb[0] = (sb[0] + zb[0]) / (2.0 * gamma);
        wb.tail(d - 1) = (sb.tail(d - 1) - zb.tail(d - 1)) / (2.0 * gamma);
        const double eta = std::sqrt(snorm / znorm);

        MatrixXd H = MatrixXd::Identity(d, d);
        H(0, 0) = wb[0];
        H.block(0, 1, 1, d - 1) = wb.tail(d - 1).transpose();
        H.block(1, 0, d - 1, 1) = wb.tail(d - 1);
        H.block(1, 1, d - 1, d - 1) +=
            wb.tail(d - 1) * wb.tail(d - 1).transpose() / (1.0 + wb[0]);
        sc.W[k] = eta * H;
        // W^2 = eta^2 (2 wb wb' - J)
        MatrixXd J = MatrixXd::Identity(d, d);
        J.diagonal().tail(d - 1).array() = -1.0;
        sc.W2[k] = eta * eta * (2.0 * wb * wb.transpose() - J);
        sc.lambda.segment(st, d) = sc.W[k] * zv;
    }
    return true;
}

VectorXd scale_mul(const ConeLayout &lay, const ConeScaling &sc, const VectorXd &v, bool inverse)
{
    VectorXd out(lay.m);
    for (int i = 0; i < lay.nlp; ++i)
        out[i] = inverse ? v[i] / sc.w_lp[i] : v[i] * sc.w_lp[i];
    for (std::size_t k = 0; k < lay.dims.size(); ++k)
    {
        const int st = lay.starts[k], d = lay.dims[k];
        if (inverse)
            out.segment(st, d) = sc.W[k].ldlt().solve(v.segment(st, d));
        else
            out.segment(st, d) = sc.W[k] * v.segment(st, d);
    }
    return out;
}

// largest step in [0, cap] keeping v + alpha*dv in the cone
double max_step(const ConeLayout &lay, const VectorXd &v, const VectorXd &dv, double cap)
{
    double alpha = cap;
    for (int i = 0; i < lay.nlp; ++i)
        if (dv[i] < 0)
            alpha = std::min(alpha, -v[i] / dv[i]);
    for (std::size_t k = 0; k < lay.dims.size(); ++k)
    {
        const int st = lay.starts[k], d = lay.dims[k];
        auto v1 = v.segment(st + 1, d - 1);
        auto d1 = dv.segment(st + 1, d - 1);
        const double a = dv[st] * dv[st] - d1.squaredNorm();
        const double b = 2.0 * (v[st] * dv[st] - v1.dot(d1));
        const double cq = v[st] * v[st] - v1.squaredNorm();
        // find smallest positive root of a t^2 + b t + c = 0 (boundary hit)
        double best = cap;
        const double disc = b * b - 4.0 * a * cq;
        if (std::abs(a) < 1e-300)
        {
            if (b < 0)
                best = -cq / b;
        }
        else if (disc >= 0)
        {
            const double sq = std::sqrt(disc);
            for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)})
                if (t > 0)
                    best = std::min(best, t);
        }
        // the quadratic can cross zero where v0 + t d0 < 0 too; also guard d0
        if (dv[st] < 0)
            best = std::min(best, std::max(0.0, -v[st] / dv[st]));
        alpha = std::min(alpha, best);
    }
    return alpha;
}

struct KktSolver
{
    const StandardForm &sf;
    const ConeLayout &lay;
    int dim;
    double reg = 1e-8;
    SpMat K;          // regularized, lower triangular filled via triplets (full)
    SpMat K_exact;    // without regularization, for iterative refinement
    Eigen::SimplicialLDLT<SpMat> ldlt;
    bool analyzed = false;

    KktSolver(const StandardForm &s, const ConeLayout &l) : sf(s), lay(l), dim(s.n + s.p + s.m) {}

    [[nodiscard]] bool factor(const ConeScaling *sc)
    {
        std::vector<Triplet> tr;
        tr.reserve(static_cast<std::size_t>(sf.A.nonZeros() + sf.G.nonZeros()) * 2 + dim * 2);
        for (int ccol = 0; ccol < sf.A.outerSize(); ++ccol)
            for (SpMat::InnerIterator it(sf.A, ccol); it; ++it)
            {
                tr.emplace_back(sf.n + static_cast<int>(it.row()), ccol, it.value());
                tr.emplace_back(ccol, sf.n + static_cast<int>(it.row()), it.value());
            }
        for (int ccol = 0; ccol < sf.G.outerSize(); ++ccol)
            for (SpMat::InnerIterator it(sf.G, ccol); it; ++it)
            {
                tr.emplace_back(sf.n + sf.p + static_cast<int>(it.row()), ccol, it.value());
                tr.emplace_back(ccol, sf.n + sf.p + static_cast<int>(it.row()), it.value());
            }
        // (3,3) block: -W^2 (identity scaling when sc is null)
        const int off = sf.n + sf.p;
        if (sc)
        {
            for (int i = 0; i < lay.nlp; ++i)
                tr.emplace_back(off + i, off + i, -sc->w_lp[i] * sc->w_lp[i]);
            for (std::size_t k = 0; k < lay.dims.size(); ++k)
            {
                const int st = lay.starts[k], d = lay.dims[k];
                for (int r = 0; r < d; ++r)
                    for (int ccol = 0; ccol < d; ++ccol)
                        tr.emplace_back(off + st + r, off + st + ccol, -sc->W2[k](r, ccol));
            }
        }
        else
        {
            // identity scaling, but laid out with the same dense cone blocks
            // as the NT case so the symbolic factorization can be reused
            for (int i = 0; i < lay.nlp; ++i)
                tr.emplace_back(off + i, off + i, -1.0);
            for (std::size_t k = 0; k < lay.dims.size(); ++k)
            {
                const int st = lay.starts[k], d = lay.dims[k];
                for (int r = 0; r < d; ++r)
                    for (int ccol = 0; ccol < d; ++ccol)
                        tr.emplace_back(off + st + r, off + st + ccol, r == ccol ? -1.0 : 0.0);
            }
        }
        K_exact.resize(dim, dim);
        K_exact.setFromTriplets(tr.begin(), tr.end());
        for (int i = 0; i < sf.n; ++i)
            tr.emplace_back(i, i, reg);
        for (int i = sf.n; i < dim; ++i)
            tr.emplace_back(i, i, -reg);
        K.resize(dim, dim);
        K.setFromTriplets(tr.begin(), tr.end());
        for (const Triplet &t : tr)
            if (!std::isfinite(t.value()))
                return false;  // the scaling blew up; no shift can rescue this
        if (!analyzed)
        {
            ldlt.analyzePattern(K);
            analyzed = true;
        }
        ldlt.factorize(K);
        // a quasi-definite matrix can still defeat the unpivoted LDLT when
        // the scaling is extreme; escalate the regularization until it holds
        for (double boost = 1e-7; ldlt.info() != Eigen::Success; boost *= 100.0)
        {
            if (boost > 1e2)
                return false;
            SpMat Kb = K;
            for (int i = 0; i < sf.n; ++i)
                Kb.coeffRef(i, i) += boost;
            for (int i = sf.n; i < dim; ++i)
                Kb.coeffRef(i, i) -= boost;
            ldlt.factorize(Kb);
        }
        return true;
    }

    VectorXd solve(const VectorXd &rhs) const
    {
        VectorXd x = ldlt.solve(rhs);
        for (int it = 0; it < 2; ++it)
        {
            VectorXd r = rhs - K_exact * x;
            x += ldlt.solve(r);
        }
        return x;
    }
};

} // namespace

SocpResult solve_standard(const StandardForm &sf, const SocpSettings &settings)
{
    const ConeLayout lay = make_layout(sf);
    SocpResult res;
    res.x = VectorXd::Zero(sf.n);

    if (sf.m == 0)
        throw SolverError("conic engine requires at least one inequality or bound");

    KktSolver kkt(sf, lay);
    kkt.reg = settings.static_reg;

    // --- initialization from two scaling-free KKT solves ---
    if (!kkt.factor(nullptr))
    {
        res.status = SocpStatus::numerical;
        return res;
    }
    VectorXd x, y, z, s;
    {
        VectorXd rhs = VectorXd::Zero(kkt.dim);
        rhs.segment(sf.n, sf.p) = sf.b;
        rhs.segment(sf.n + sf.p, sf.m) = sf.h;
        const VectorXd sol = kkt.solve(rhs);
        x = sol.head(sf.n);
        s = -sol.segment(sf.n + sf.p, sf.m);  // = h - Gx at this solution
        bring_to_cone(lay, s);

        VectorXd rhs2 = VectorXd::Zero(kkt.dim);
        rhs2.head(sf.n) = -sf.c;
        const VectorXd sol2 = kkt.solve(rhs2);
        y = sol2.segment(sf.n, sf.p);
        z = sol2.segment(sf.n + sf.p, sf.m);
        bring_to_cone(lay, z);
    }
    double tau = 1.0, kappa = 1.0;

    const double norm_b = std::max(1.0, sf.b.norm());
    const double norm_h = std::max(1.0, sf.h.norm());
    const double norm_c = std::max(1.0, sf.c.norm());

    ConeScaling sc;
    const VectorXd e = cone_identity(lay);

    for (int iter = 0; iter < settings.max_iter; ++iter)
    {
        res.iterations = iter;
        // residuals of the homogeneous embedding
        const VectorXd hx = sf.A.transpose() * y + sf.G.transpose() * z + sf.c * tau;
        const VectorXd hy = sf.A * x - sf.b * tau;
        const VectorXd hz = sf.G * x + s - sf.h * tau;
        const double ht = sf.c.dot(x) + sf.b.dot(y) + sf.h.dot(z) + kappa;
        const double mu = (s.dot(z) + tau * kappa) / (lay.degree + 1.0);

        const double pres = std::max(hy.norm() / norm_b, hz.norm() / norm_h) / tau;
        const double dres = hx.norm() / norm_c / tau;
        const double pcost = sf.c.dot(x) / tau;
        const double dcost = -(sf.b.dot(y) + sf.h.dot(z)) / tau;
        const double abs_gap = s.dot(z) / (tau * tau);
        const double rel_gap = abs_gap / std::max({1.0, std::abs(pcost), std::abs(dcost)});

        res.primal_residual = pres;
        res.dual_residual = dres;
        res.gap = abs_gap;

        if (pres <= settings.feas_tol && dres <= settings.feas_tol &&
            (abs_gap <= settings.gap_tol || rel_gap <= settings.rel_gap_tol))
        {
            res.status = SocpStatus::optimal;
            res.x = x / tau;
            res.objective = sf.c.dot(res.x) + sf.obj_constant;
            return res;
        }

        // reduced-accuracy acceptance for iterates that stall just short of the
        // requested tolerances before degenerating numerically
        const auto near_optimal = [&]() -> bool {
            return pres <= 1e3 * settings.feas_tol && dres <= 1e3 * settings.feas_tol &&
                   (abs_gap <= 1e4 * settings.gap_tol || rel_gap <= 1e4 * settings.rel_gap_tol);
        };
        const auto accept = [&]() {
            res.status = SocpStatus::optimal;
            res.x = x / tau;
            res.objective = sf.c.dot(res.x) + sf.obj_constant;
        };

        // classification of the (x, y, z, s) ray as an infeasibility certificate
        const auto classify_ray = [&]() -> SocpStatus {
            const double cert_p = sf.b.dot(y) + sf.h.dot(z);
            const double cert_d = sf.c.dot(x);
            const double p_quality = (sf.A.transpose() * y + sf.G.transpose() * z).norm();
            const double d_quality = std::max((sf.A * x).norm(), (sf.G * x + s).norm());
            if (cert_p < 0 && p_quality <= 1e-6 * std::abs(cert_p))
                return SocpStatus::primal_infeasible;
            if (cert_d < 0 && d_quality <= 1e-6 * std::abs(cert_d))
                return SocpStatus::dual_infeasible;
            return SocpStatus::numerical;
        };

        // tau collapsing while kappa stays away signals infeasibility
        if (tau <= 1e-10 || (mu <= 1e-12 && tau < 1e-6 * kappa))
        {
            res.status = classify_ray();
            return res;
        }

        if (!update_scaling(lay, s, z, sc))
        {
            // the iterate degenerated; accept a near-optimal point or a clean
            // infeasibility certificate before giving up
            if (near_optimal())
                accept();
            else
                res.status = tau < 1e-6 * kappa ? classify_ray() : SocpStatus::numerical;
            return res;
        }
        if (!kkt.factor(&sc))
        {
            // same handling as a degenerate scaling: accept what we can prove
            if (near_optimal())
                accept();
            else
                res.status = tau < 1e-6 * kappa ? classify_ray() : SocpStatus::numerical;
            return res;
        }

        // common second solve direction (for the tau elimination)
        VectorXd rhs2 = VectorXd::Zero(kkt.dim);
        rhs2.head(sf.n) = -sf.c;
        rhs2.segment(sf.n, sf.p) = sf.b;
        rhs2.segment(sf.n + sf.p, sf.m) = sf.h;
        const VectorXd v2 = kkt.solve(rhs2);
        const double denom = sf.c.dot(v2.head(sf.n)) + sf.b.dot(v2.segment(sf.n, sf.p)) +
                             sf.h.dot(v2.segment(sf.n + sf.p, sf.m)) - kappa / tau;

        auto direction = [&](double rho, const VectorXd &ds_rhs, double dk_rhs, VectorXd &dx,
                             VectorXd &dy, VectorXd &dz, VectorXd &ds, double &dtau,
                             double &dkappa) {
            VectorXd rhs1(kkt.dim);
            rhs1.head(sf.n) = -rho * hx;
            rhs1.segment(sf.n, sf.p) = -rho * hy;
            rhs1.segment(sf.n + sf.p, sf.m) =
                -rho * hz - scale_mul(lay, sc, conic_division(lay, sc.lambda, ds_rhs), false);
            const VectorXd v1 = kkt.solve(rhs1);
            dtau = (-rho * ht - dk_rhs / tau - sf.c.dot(v1.head(sf.n)) -
                    sf.b.dot(v1.segment(sf.n, sf.p)) - sf.h.dot(v1.segment(sf.n + sf.p, sf.m))) /
                   denom;
            dx = v1.head(sf.n) + dtau * v2.head(sf.n);
            dy = v1.segment(sf.n, sf.p) + dtau * v2.segment(sf.n, sf.p);
            dz = v1.segment(sf.n + sf.p, sf.m) + dtau * v2.segment(sf.n + sf.p, sf.m);
            ds = scale_mul(lay, sc, conic_division(lay, sc.lambda, ds_rhs), false) -
                 scale_mul(lay, sc, scale_mul(lay, sc, dz, false), false);
            dkappa = (dk_rhs - kappa * dtau) / tau;
        };

        // predictor (affine) direction
        VectorXd dxa, dya, dza, dsa;
        double dta, dka;
        const VectorXd ll = conic_product(lay, sc.lambda, sc.lambda);
        direction(1.0, -ll, -tau * kappa, dxa, dya, dza, dsa, dta, dka);

        double alpha_a = max_step(lay, s, dsa, 1.0);
        alpha_a = max_step(lay, z, dza, alpha_a);
        if (dta < 0)
            alpha_a = std::min(alpha_a, -tau / dta);
        if (dka < 0)
            alpha_a = std::min(alpha_a, -kappa / dka);
        const double sigma = std::pow(1.0 - alpha_a, 3);

        // corrector with Mehrotra term
        const VectorXd ws = scale_mul(lay, sc, dsa, true);   // W^{-1} ds
        const VectorXd wz = scale_mul(lay, sc, dza, false);  // W dz
        const VectorXd ds_rhs = -ll - conic_product(lay, ws, wz) + sigma * mu * e;
        const double dk_rhs = -tau * kappa - dta * dka + sigma * mu;

        VectorXd dx, dy, dz, ds;
        double dtau, dkappa;
        direction(1.0 - sigma, ds_rhs, dk_rhs, dx, dy, dz, ds, dtau, dkappa);

        double alpha = max_step(lay, s, ds, 1.0 / 0.98);
        alpha = max_step(lay, z, dz, alpha);
        if (dtau < 0)
            alpha = std::min(alpha, -tau / dtau);
        if (dkappa < 0)
            alpha = std::min(alpha, -kappa / dkappa);
        alpha = std::min(alpha * 0.98, 1.0);

        x += alpha * dx;
        y += alpha * dy;
        z += alpha * dz;
        s += alpha * ds;
        tau += alpha * dtau;
        kappa += alpha * dkappa;
    }

    res.status = SocpStatus::max_iter;
    res.x = x / tau;
    res.objective = sf.c.dot(res.x) + sf.obj_constant;
    if (res.primal_residual <= 1e3 * settings.feas_tol &&
        res.dual_residual <= 1e3 * settings.feas_tol &&
        (res.gap <= 1e4 * settings.gap_tol ||
         res.gap / std::max(1.0, std::abs(res.objective)) <= 1e4 * settings.rel_gap_tol))
        res.status = SocpStatus::optimal;
    return res;
}

} // namespace mmg
