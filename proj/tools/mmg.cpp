#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmg/bnb.hpp"
#include "mmg/builder.hpp"
#include "mmg/case.hpp"
#include "mmg/cutloop.hpp"
#include "mmg/errors.hpp"
#include "mmg/sfr.hpp"
#include "mmg/ufls.hpp"

namespace
{

struct RunConfig
{
    std::string case_path;
    double severity_kw = -1.0;    // < 0: keep the case value
    double f_nominal_hz = 0.0;    // 0: keep the case value
    double mip_gap = 0.0;
    double time_limit_s = 1e30;
    long seed = 0;
    std::string out_dir = ".";
    bool baseline_only = false;
    std::string mg_subset;        // simulate-sfr: comma-separated microgrid ids
    double dp = 0.0;              // simulate-sfr: step disturbance [pu]
    double t_end = 0.0;           // simulate-sfr: 0 = automatic horizon
};

mmg::NetworkCase load_configured(const RunConfig &cfg)
{
    mmg::NetworkCase c = mmg::load_case(cfg.case_path);
    if (cfg.f_nominal_hz > 0.0)
    {
        // pu limits were derived from the case's nominal; rebase them
        const double scale = c.bases.f_nominal_hz / cfg.f_nominal_hz;
        c.frequency_limits.nadir_min *= scale;
        c.frequency_limits.nadir_max *= scale;
        c.frequency_limits.ss_min *= scale;
        c.frequency_limits.ss_max *= scale;
        c.bases.f_nominal_hz = cfg.f_nominal_hz;
    }
    if (cfg.severity_kw >= 0.0)
        c.rescale_severity(cfg.severity_kw / c.bases.s_base_kw);
    return c;
}

mmg::SolveSettings solver_settings(const RunConfig &cfg)
{
    mmg::SolveSettings s;
    s.mip_gap = cfg.mip_gap;
    s.time_limit_s = cfg.time_limit_s;
    const char *log = std::getenv("MMG_LOG");
    s.log_nodes = log != nullptr && std::string(log) == "nodes";
    return s;
}

void write_file(const std::filesystem::path &path, const std::string &content)
{
    std::ofstream out(path);
    if (!out)
        throw mmg::ParseError("cannot write '" + path.string() + "'");
    out << content;
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

// both units, always: "<pu> pu (<Hz> Hz)"
std::string freq_pair(double pu, double f_nominal)
{
    return fmt(pu) + " pu (" + fmt(pu * f_nominal) + " Hz)";
}

std::string solution_report(const mmg::NetworkCase &c, const mmg::CutLoopResult &r)
{
    const double s_base = c.bases.s_base_kw;
    const double fn = c.bases.f_nominal_hz;
    std::ostringstream os;
    os << "objective " << fmt(r.mip.objective) << "\n";
    os << "curtailment_kw " << fmt(r.solution.curtailment_pu * s_base) << "\n";
    os << "curtailment_pu " << fmt(r.solution.curtailment_pu) << "\n";
    os << "iterations " << r.trace.size() << "\n";
    os << "cut_pool " << r.cuts.size() << "\n";
    os << "closed_edges";
    for (const std::string &id : r.solution.topology.on_edges)
        os << " " << id;
    os << "\n";
    for (const auto &[mg, shed] : r.solution.curtailment_by_mg)
        os << "mg " << mg << " curtailment_kw " << fmt(shed * s_base) << "\n";
    for (const auto &[key, on] : r.solution.load_status)
        if (on == 0)
            os << "shed " << key << "\n";
    for (const auto &[id, p] : r.solution.der_dispatch)
        os << "der " << id << " p_kw " << fmt(p * s_base) << "\n";
    os << "limits nadir " << freq_pair(c.frequency_limits.nadir_min, fn) << " to "
       << freq_pair(c.frequency_limits.nadir_max, fn) << "\n";
    os << "limits steady " << freq_pair(c.frequency_limits.ss_min, fn) << " to "
       << freq_pair(c.frequency_limits.ss_max, fn) << "\n";
    return os.str();
}

int cmd_solve(const RunConfig &cfg)
{
    const mmg::NetworkCase c = load_configured(cfg);
    mmg::CutLoopResult r = mmg::run_cut_loop(c, solver_settings(cfg));
    if (r.mip.status == mmg::MipStatus::infeasible)
    {
        std::cerr << "no feasible operating strategy\n";
        return 2;
    }
    if (r.mip.status != mmg::MipStatus::optimal)
    {
        std::cerr << "solver hit a node or time limit before proving optimality\n";
        return 3;
    }
    const mmg::VerifyReport vr = mmg::verify(c, r.model, r.solution);

    const std::filesystem::path out(cfg.out_dir);
    std::filesystem::create_directories(out);
    write_file(out / "solution.txt", solution_report(c, r));
    write_file(out / "trace.csv", mmg::trace_csv(r.trace));
    write_file(out / "verify.txt", vr.text(c));

    std::cout << "curtailment " << fmt(r.solution.curtailment_pu * c.bases.s_base_kw)
              << " kW over " << r.trace.size() << " iterations, verify "
              << (vr.ok ? "ok" : "FAILED") << "\n";
    return vr.ok ? 0 : 3;
}

int cmd_baseline(const RunConfig &cfg, bool with_optimizer)
{
    const mmg::NetworkCase c = load_configured(cfg);
    const double fn = c.bases.f_nominal_hz;
    const mmg::UflsOutcome base = mmg::simulate_ufls(c, mmg::comparison_relay_stages());

    const std::filesystem::path out(cfg.out_dir);
    std::filesystem::create_directories(out);
    write_file(out / "baseline.csv", base.csv());

    std::ostringstream os;
    if (with_optimizer)
    {
        mmg::CutLoopResult r = mmg::run_cut_loop(c, solver_settings(cfg));
        const mmg::VerifyReport vr = mmg::verify(c, r.model, r.solution);
        write_file(out / "solution.txt", solution_report(c, r));
        write_file(out / "trace.csv", mmg::trace_csv(r.trace));
        write_file(out / "verify.txt", vr.text(c));
        os << "scheme,shed_kw,limits\n";
        os << "optimized," << fmt(r.solution.curtailment_pu * c.bases.s_base_kw) << ","
           << (vr.ok ? "ok" : "violated") << "\n";
        bool base_ok = true;
        for (const mmg::MgUflsResult &m : base.per_mg)
            base_ok = base_ok && m.within_limits;
        os << "baseline," << fmt(base.total_shed_kw) << "," << (base_ok ? "ok" : "violated")
           << "\n\n";
    }
    os << "mg,shed_kw,nadir,steady,within_limits\n";
    for (const mmg::MgUflsResult &m : base.per_mg)
        os << m.mg << "," << fmt(m.shed_kw) << "," << freq_pair(m.nadir_hz / fn, fn) << ","
           << freq_pair(m.steady_hz / fn, fn) << "," << (m.within_limits ? 1 : 0) << "\n";
    write_file(out / (with_optimizer ? "compare.csv" : "baseline_summary.csv"), os.str());
    std::cout << os.str();
    return 0;
}

int cmd_simulate_sfr(const RunConfig &cfg)
{
    const mmg::NetworkCase c = load_configured(cfg);
    std::set<int> mgs;
    std::stringstream ss(cfg.mg_subset);
    for (std::string tok; std::getline(ss, tok, ',');)
        mgs.insert(std::stoi(tok));
    if (mgs.empty())
        for (const mmg::Microgrid &m : c.microgrids)
            mgs.insert(m.id);

    const mmg::SfrAggregate agg = mmg::aggregate_for(c, mgs);
    const mmg::SfrShape shape = mmg::response_shape(agg);
    const auto [alpha, beta] = mmg::component_coefficients(c, mgs);
    double t_end = cfg.t_end;
    if (t_end <= 0.0)
        t_end = std::max(20.0 * agg.t_lag, 5.0 * shape.t_peak + 1.0);
    const mmg::SfrTrajectory tr = mmg::simulate_step(agg, cfg.dp, t_end, 1e-4);

    const double fn = c.bases.f_nominal_hz;
    std::ostringstream os;
    os << "t_s,w_pu,w_hz\n";
    for (std::size_t i = 0; i < tr.omega.size(); ++i)
        os << fmt(static_cast<double>(i) * tr.dt) << "," << fmt(tr.omega[i]) << ","
           << fmt(tr.omega[i] * fn) << "\n";
    const std::filesystem::path out(cfg.out_dir);
    std::filesystem::create_directories(out);
    write_file(out / "trajectory.csv", os.str());

    std::cout << "alpha " << fmt(alpha) << " beta " << fmt(beta) << "\n"
              << "extreme " << freq_pair(alpha * cfg.dp, fn) << " at t "
              << fmt(shape.t_peak) << " s\n"
              << "steady " << freq_pair(beta * cfg.dp, fn) << "\n";
    return 0;
}

int cmd_validate(const RunConfig &cfg)
{
    const mmg::NetworkCase c = load_configured(cfg);
    const mmg::ModelInstance m = mmg::build_base_model(c);
    std::cout << "ok " << c.name << ": " << c.microgrids.size() << " microgrids, "
              << c.linking_lines.size() << " linking lines\n"
              << mmg::model_census(c, m);
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Post-islanding operation planner for multi-microgrid networks"};
    app.require_subcommand(1);

    RunConfig cfg;
    app.add_option("--case,-c", cfg.case_path, "case file (JSON)")->required();
    app.add_option("--severity", cfg.severity_kw, "severity override [kW]");
    app.add_option("--f-nominal", cfg.f_nominal_hz, "nominal frequency override [Hz]");
    app.add_option("--mip-gap", cfg.mip_gap, "relative MIP gap at termination");
    app.add_option("--time-limit", cfg.time_limit_s, "master solve time limit [s]");
    app.add_option("--seed", cfg.seed, "seed for randomized workflows");
    app.add_option("--out", cfg.out_dir, "report output directory");

    CLI::App *solve = app.add_subcommand("solve", "optimize the post-islanding strategy");
    CLI::App *compare =
        app.add_subcommand("compare", "optimizer against the relay-table baseline");
    compare->add_flag("--baseline-only", cfg.baseline_only, "skip the optimizer");
    app.add_subcommand("baseline-ufls", "relay-table shedding simulation only");
    CLI::App *sim = app.add_subcommand("simulate-sfr", "frequency response of a subset");
    sim->add_option("--mgs", cfg.mg_subset, "comma-separated microgrid ids (default: all)");
    sim->add_option("--dp", cfg.dp, "step power disturbance [pu]")->required();
    sim->add_option("--t-end", cfg.t_end, "simulation horizon [s] (default: automatic)");
    app.add_subcommand("validate", "check the case file and print the model census");
    for (CLI::App *s : app.get_subcommands([](const CLI::App *) { return true; }))
        s->fallthrough();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 1;
    }

    try
    {
        if (solve->parsed())
            return cmd_solve(cfg);
        if (compare->parsed())
            return cmd_baseline(cfg, !cfg.baseline_only);
        if (app.get_subcommand("baseline-ufls")->parsed())
            return cmd_baseline(cfg, false);
        if (sim->parsed())
            return cmd_simulate_sfr(cfg);
        return cmd_validate(cfg);
    }
    catch (const mmg::ParseError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    catch (const mmg::ValidationError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
