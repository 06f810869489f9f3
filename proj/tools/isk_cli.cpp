// Command-line front end for the sigma_k flow laboratory: classification,
// analytic profiles, flow runs, the variational cross-check, and phase
// diagram sweeps. CSV goes to files, human-readable status to stdout.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "isk/classes.hpp"
#include "isk/diagnostics.hpp"
#include "isk/flow.hpp"
#include "isk/gpoly.hpp"
#include "isk/obstacle.hpp"
#include "isk/stationary.hpp"

namespace {

using json = nlohmann::json;
using namespace isk;

constexpr int kSchemaVersion = 1;

struct RunConfig {
    std::string family = "pn";
    int n = 2, k = 1, m = 0;
    double alpha = 1.2, beta = 2.0;
    double b = 0.1, b_prime = 2.0;
    std::string flux = "neg_identity";
    int points = 400;
    double cfl = 0.8;
    double steady_tol = 1e-8;
    double max_time = 1e4;
    double theta = 0.0;
    std::string init = "chord";
    std::string exec = "parallel";
    std::string outdir = ".";

    bool is_pn() const { return family == "pn"; }

    flow::FlowProblem problem() const {
        flow::FlowProblem fp;
        if (is_pn())
            fp.manifold = classes::PnProblem{n, k, alpha, beta};
        else
            fp.manifold = classes::XmnProblem{m, n, k, b, b_prime};
        if (flux == "neg_identity")
            fp.flux = potential::FluxFunction::neg_identity();
        else if (flux == "neg_log")
            fp.flux = potential::FluxFunction::neg_log();
        else
            throw std::invalid_argument("unknown flux: " + flux);
        return fp;
    }

    flow::SchemeConfig scheme() const {
        flow::SchemeConfig s;
        s.cfl = cfl;
        s.steady_tol = steady_tol;
        s.max_time = max_time;
        s.theta = theta;
        s.exec = exec == "serial" ? flow::Exec::Serial : flow::Exec::Parallel;
        return s;
    }
};

void add_common(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--family", cfg.family)->check(CLI::IsMember({"pn", "xmn"}));
    cmd->add_option("--n", cfg.n);
    cmd->add_option("--k", cfg.k);
    cmd->add_option("--m", cfg.m);
    cmd->add_option("--alpha", cfg.alpha);
    cmd->add_option("--beta", cfg.beta);
    cmd->add_option("--b", cfg.b);
    cmd->add_option("--bprime", cfg.b_prime);
    cmd->add_option("--flux", cfg.flux)->check(CLI::IsMember({"neg_identity", "neg_log"}));
    cmd->add_option("--points", cfg.points);
    cmd->add_option("--cfl", cfg.cfl);
    cmd->add_option("--steady-tol", cfg.steady_tol);
    cmd->add_option("--max-time", cfg.max_time);
    cmd->add_option("--theta", cfg.theta);
    cmd->add_option("--init", cfg.init)->check(CLI::IsMember({"chord", "analytic"}));
    cmd->add_option("--exec", cfg.exec)->check(CLI::IsMember({"serial", "parallel"}));
    cmd->add_option("--outdir", cfg.outdir);
    cmd->set_config("--config");
}

std::string variant_name(classes::Variant v) {
    switch (v) {
        case classes::Variant::Smooth: return "Smooth";
        case classes::Variant::ConicBoundary: return "ConicBoundary";
        default: return "CurrentBlowup";
    }
}

std::string detail_name(classes::PnDetail d) {
    switch (d) {
        case classes::PnDetail::Concave: return "Concave";
        case classes::PnDetail::ConvexInterior: return "ConvexInterior";
        case classes::PnDetail::ConvexTangent: return "ConvexTangent";
        case classes::PnDetail::Obstacle: return "Obstacle";
        default: return "None";
    }
}

json classify_json(const RunConfig& cfg) {
    json out;
    out["schema_version"] = kSchemaVersion;
    if (cfg.is_pn()) {
        classes::PnProblem p{cfg.n, cfg.k, cfg.alpha, cfg.beta};
        auto label = classes::classify_pn(p);
        out["family"] = "pn";
        out["case"] = variant_name(label.variant);
        out["detail"] = detail_name(label.detail);
        out["ratio"] = classes::ratio_pn(p);
        out["threshold"] = double(p.n - p.k) / p.n;
        if (label.variant == classes::Variant::CurrentBlowup) {
            double lam = stationary::solve_lambda_pn(p);
            out["lambda"] = lam;
            auto lc = classes::limit_class(p, lam);
            out["limit_class"] = {{"basis", lc.basis},
                                  {"coefficients", lc.coeffs},
                                  {"current_coefficient", lc.current_coefficient}};
        }
    } else {
        classes::XmnProblem p{cfg.m, cfg.n, cfg.k, cfg.b, cfg.b_prime};
        double ck = gpoly::topological_constant_xmn(p.m, p.n, p.k, p.b, p.b_prime);
        auto label = classes::classify_xmn(p, ck);
        out["family"] = "xmn";
        out["case"] = variant_name(label.variant);
        out["c_k"] = ck;
        out["threshold"] = to_double(Rational(binomial(p.n, p.k)));
        if (label.variant == classes::Variant::CurrentBlowup) {
            auto sys = stationary::solve_xmn_system(p);
            out["lambda"] = sys.lambda;
            out["alpha"] = sys.alpha;
            out["beta"] = sys.beta;
            auto lc = classes::limit_class(p, sys.lambda);
            out["limit_class"] = {{"basis", lc.basis},
                                  {"coefficients", lc.coeffs},
                                  {"current_coefficient", lc.current_coefficient}};
        }
    }
    return out;
}

int cmd_classify(const RunConfig& cfg) {
    json out = classify_json(cfg);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_stationary(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.outdir);
    std::string path = cfg.outdir + "/stationary.csv";
    if (cfg.is_pn()) {
        auto s = stationary::stationary_pn({cfg.n, cfg.k, cfg.alpha, cfg.beta});
        stationary::export_csv(s, cfg.points, path);
        std::cout << "lambda=" << s.lambda << " a=" << s.a << " b=" << s.b
                  << " sigma=" << s.sigma_constant << "\n";
    } else {
        auto s = stationary::stationary_xmn({cfg.m, cfg.n, cfg.k, cfg.b, cfg.b_prime});
        stationary::export_csv(s, cfg.points, path);
        std::cout << "lambda=" << s.lambda << " alpha=" << s.alpha << " beta=" << s.beta
                  << "\n";
    }
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_lambda(const RunConfig& cfg) {
    if (cfg.is_pn()) {
        classes::PnProblem p{cfg.n, cfg.k, cfg.alpha, cfg.beta};
        std::printf("%.12f\n", stationary::solve_lambda_pn(p));
    } else {
        auto sys = stationary::solve_xmn_system({cfg.m, cfg.n, cfg.k, cfg.b, cfg.b_prime});
        std::printf("%.12f\n", sys.lambda);
    }
    return 0;
}

int cmd_evolve(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.outdir);
    auto problem = cfg.problem();
    auto grid = problem.default_grid(cfg.points);
    auto init = cfg.init == "analytic" ? flow::InitialData::AnalyticLimit
                                       : flow::InitialData::Chord;
    auto initial = flow::make_initial(problem, grid, init);
    auto res = flow::evolve(problem, grid, cfg.scheme(), init);

    int k = cfg.is_pn() ? cfg.k : 1;
    auto f_final = res.state.f_values(k);
    auto analytic = problem.analytic_limit();
    auto sigma = flow::sigma_profile(problem, grid, res.state);

    {
        std::ofstream out(cfg.outdir + "/snapshots.csv");
        out << "t,sup_dist,sigma_min,sigma_max,min_fx,max_rhs\n";
        out.precision(12);
        for (const auto& s : res.series)
            out << s.t << ',' << s.sup_dist_analytic << ',' << s.sigma_min << ','
                << s.sigma_max << ',' << s.min_fx << ',' << s.max_rhs << '\n';
    }
    {
        std::ofstream out(cfg.outdir + "/profile.csv");
        out << "x,f0,f_final,f_analytic,sigma\n";
        out.precision(12);
        flow::FlowState s0;
        s0.variable = problem.variable();
        s0.values = initial;
        auto f0 = s0.f_values(k);
        for (int i = 0; i < grid.points; ++i)
            out << grid.x(i) << ',' << f0[i] << ',' << f_final[i] << ','
                << analytic.eval(grid.x(i)) << ',' << sigma[i] << '\n';
    }

    double sup = res.series.back().sup_dist_analytic;
    json summary;
    summary["schema_version"] = kSchemaVersion;
    summary["classification"] = classify_json(cfg);
    summary["converged"] = res.converged;
    summary["steps"] = res.steps;
    summary["dt"] = res.dt;
    summary["final_residual"] = res.final_residual;
    summary["sup_dist_analytic"] = sup;
    summary["wall_seconds"] = res.wall_seconds;
    if (analytic.lambda > analytic.x_lo + 1e-9) {
        auto u = problem.make_potential();
        obstacle::ObstacleProblem op;  // only for the contact extraction helper
        op.n = cfg.n;
        op.k = k;
        op.x_lo = grid.x_lo;
        op.x_hi = grid.x_hi;
        op.obstacle = problem.flat_value();
        op.boundary_lo = problem.flat_value();
        op.boundary_hi = *std::max_element(f_final.begin(), f_final.end());
        std::vector<double> xs(grid.points);
        for (int i = 0; i < grid.points; ++i) xs[i] = grid.x(i);
        summary["lambda_flow"] = obstacle::contact_point(op, xs, f_final);
        summary["lambda_algebraic"] = analytic.lambda;
    }
    std::ofstream(cfg.outdir + "/summary.json") << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
    return res.converged ? 0 : 2;
}

int cmd_obstacle(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.outdir);
    obstacle::ObstacleProblem p;
    p.n = cfg.n;
    p.k = cfg.k;
    p.x_lo = 1.0;
    p.x_hi = cfg.beta;
    p.boundary_lo = 1.0;
    p.boundary_hi = std::pow(cfg.alpha, cfg.k);
    auto r = obstacle::solve_psor(p, cfg.points);
    auto c = obstacle::complementarity_residual(p, r.x, r.values);
    double lam = obstacle::contact_point(p, r.x, r.values);
    obstacle::export_csv(p, r.x, r.values, cfg.outdir + "/obstacle.csv");
    json out;
    out["schema_version"] = kSchemaVersion;
    out["sweeps"] = r.sweeps;
    out["contact_point"] = lam;
    out["max_violation"] = c.max_violation;
    out["max_residual_free"] = c.max_residual_free;
    out["max_positive_contact"] = c.max_positive_contact;
    out["energy"] = obstacle::energy(p, r.values);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_phase_diagram(const RunConfig& cfg, double lo1, double hi1, double lo2,
                      double hi2, int resolution) {
    std::filesystem::create_directories(cfg.outdir);
    std::string path = cfg.outdir + "/phase_diagram.csv";
    std::vector<std::string> rows(size_t(resolution) * resolution);
#pragma omp parallel for schedule(dynamic)
    for (int idx = 0; idx < resolution * resolution; ++idx) {
        int i = idx / resolution, j = idx % resolution;
        double p1 = lo1 + (hi1 - lo1) * i / (resolution - 1);
        double p2 = lo2 + (hi2 - lo2) * j / (resolution - 1);
        std::string label;
        double indicator;
        if (cfg.is_pn()) {
            classes::PnProblem p{cfg.n, cfg.k, p1, p2};
            label = variant_name(classes::classify_pn(p).variant);
            indicator = classes::ratio_pn(p);
        } else {
            classes::XmnProblem p{cfg.m, cfg.n, cfg.k, p1, p2};
            double ck = gpoly::topological_constant_xmn(p.m, p.n, p.k, p.b, p.b_prime);
            label = variant_name(classes::classify_xmn(p, ck).variant);
            indicator = ck;
        }
        char buf[128];
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%s,%.12g\n", p1, p2, label.c_str(),
                      indicator);
        rows[idx] = buf;
    }
    std::ofstream out(path);
    out << (cfg.is_pn() ? "alpha,beta,case,ratio\n" : "b,bprime,case,c_k\n");
    for (const auto& s : rows) out << s;
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_report(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.outdir);
    json report;
    report["schema_version"] = kSchemaVersion;
    report["classification"] = classify_json(cfg);

    auto problem = cfg.problem();
    auto grid = problem.default_grid(cfg.points);
    auto res = flow::evolve(problem, grid, cfg.scheme());
    report["flow"] = {{"converged", res.converged},
                      {"steps", res.steps},
                      {"sup_dist_analytic", res.series.back().sup_dist_analytic},
                      {"wall_seconds", res.wall_seconds}};

    auto analytic = problem.analytic_limit();
    auto u = problem.make_potential();
    auto rho = diagnostics::uniform_rho_grid(25.0, 2001);
    auto curve = diagnostics::reconstruct_vprime(
        [&](double x) { return analytic.eval(x); }, analytic.x_lo, analytic.x_hi, *u, rho);
    report["lambda_estimate"] = diagnostics::lambda_estimate(curve);
    try {
        auto fit = diagnostics::fit_cone_exponent(curve, analytic.lambda);
        report["cone_fit"] = {{"exponent", fit.exponent},
                              {"coefficient", fit.coefficient},
                              {"r2", fit.r2}};
    } catch (const diagnostics::InsufficientResolution&) {
        report["cone_fit"] = nullptr;
    }

    if (cfg.is_pn()) {
        obstacle::ObstacleProblem op;
        op.n = cfg.n;
        op.k = cfg.k;
        op.x_lo = 1.0;
        op.x_hi = cfg.beta;
        op.boundary_hi = std::pow(cfg.alpha, cfg.k);
        auto r = obstacle::solve_psor(op, cfg.points);
        report["obstacle"] = {
            {"contact_point", obstacle::contact_point(op, r.x, r.values)},
            {"sweeps", r.sweeps}};
    }
    std::ofstream(cfg.outdir + "/report.json") << report.dump(2) << "\n";
    std::cout << report.dump(2) << "\n";
    return res.converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for symmetric inverse sigma_k flows"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* classify = app.add_subcommand("classify", "Print the convergence case");
    auto* stationary_cmd = app.add_subcommand("stationary", "Export the analytic limit profile");
    auto* lambda_cmd = app.add_subcommand("lambda", "Print the contact point");
    auto* evolve_cmd = app.add_subcommand("evolve", "Run the reduced flow to steady state");
    auto* obstacle_cmd = app.add_subcommand("obstacle", "Solve the variational cross-check");
    auto* phase = app.add_subcommand("phase-diagram", "Sweep case labels over a parameter grid");
    auto* report = app.add_subcommand("report", "Full pipeline report for one configuration");
    for (auto* c : {classify, stationary_cmd, lambda_cmd, evolve_cmd, obstacle_cmd, phase, report})
        add_common(c, cfg);

    double lo1 = 1.05, hi1 = 3.0, lo2 = 1.05, hi2 = 3.0;
    int resolution = 50;
    phase->add_option("--lo1", lo1, "first parameter lower bound");
    phase->add_option("--hi1", hi1);
    phase->add_option("--lo2", lo2);
    phase->add_option("--hi2", hi2);
    phase->add_option("--resolution", resolution);

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify->parsed()) return cmd_classify(cfg);
        if (stationary_cmd->parsed()) return cmd_stationary(cfg);
        if (lambda_cmd->parsed()) return cmd_lambda(cfg);
        if (evolve_cmd->parsed()) return cmd_evolve(cfg);
        if (obstacle_cmd->parsed()) return cmd_obstacle(cfg);
        if (phase->parsed()) return cmd_phase_diagram(cfg, lo1, hi1, lo2, hi2, resolution);
        if (report->parsed()) return cmd_report(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
