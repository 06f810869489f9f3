#include "isk/flow.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "isk/sigma.hpp"

namespace isk::flow {

namespace {

using potential::FluxFunction;
using potential::Potential;

double binom_d(int n, int k) { return to_double(Rational(binomial(n, k))); }

template <bool Par, class Body>
void interior_loop(int npts, Body&& body) {
    if constexpr (Par) {
#pragma omp parallel for schedule(static)
        for (int i = 1; i < npts - 1; ++i) body(i);
    } else {
        for (int i = 1; i < npts - 1; ++i) body(i);
    }
}

template <class Body>
void run_interior(int npts, Exec exec, Body&& body) {
    if (exec == Exec::Parallel)
        interior_loop<true>(npts, body);
    else
        interior_loop<false>(npts, body);
}

void check_monotone(std::span<const double> f, double h, double tol) {
    for (size_t i = 2; i + 1 < f.size(); ++i)
        if ((f[i + 1] - f[i - 1]) / (2.0 * h) < -tol)
            throw IntegrityError("flow state lost monotonicity");
}

}  // namespace

void Grid::validate() const {
    if (points < 16) throw std::invalid_argument("Grid: need at least 16 points");
    if (!(x_hi > x_lo)) throw std::invalid_argument("Grid: x_hi must exceed x_lo");
}

void SchemeConfig::validate() const {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("SchemeConfig: cfl in (0,1]");
    if (!(steady_tol > 0.0)) throw std::invalid_argument("SchemeConfig: steady_tol > 0");
    if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("SchemeConfig: theta in [0,1]");
}

Variable FlowProblem::variable() const {
    if (is_pn() && pn().k > 1) return Variable::G;
    return Variable::F;
}

double FlowProblem::boundary_lo() const { return is_pn() ? 1.0 : 0.0; }

double FlowProblem::boundary_hi() const {
    if (is_pn()) return std::pow(pn().alpha, pn().k);
    return xmn().b;
}

double FlowProblem::flat_value() const { return is_pn() ? 1.0 : 0.0; }

Grid FlowProblem::default_grid(int points) const {
    if (is_pn()) return Grid{1.0, pn().beta, points};
    return Grid{0.0, xmn().b_prime, points};
}

std::unique_ptr<Potential> FlowProblem::make_potential() const {
    if (is_pn()) return std::make_unique<potential::PotentialProfile>(1.0, pn().alpha);
    return std::make_unique<potential::PotentialProfile>(0.0, xmn().b);
}

stationary::StationaryProfile FlowProblem::analytic_limit() const {
    if (is_pn()) return stationary::stationary_pn(pn());
    return stationary::stationary_xmn(xmn());
}

std::vector<double> FlowState::f_values(int k) const {
    if (variable == Variable::F || k == 1) return values;
    std::vector<double> f(values.size());
    for (size_t i = 0; i < values.size(); ++i) f[i] = kroot(values[i], k);
    return f;
}

void rhs_jflow(const classes::PnProblem& p, const Potential& u, const FluxFunction& flux,
               const Grid& grid, std::span<const double> f, std::span<double> out,
               Exec exec) {
    const int npts = grid.points;
    const double h = grid.spacing();
    const double nm1 = p.n - 1;
    check_monotone(f, h, 1e-10);
    out[0] = out[npts - 1] = 0.0;
    run_interior(npts, exec, [&](int i) {
        double x = grid.x(i);
        double fx = (f[i + 1] - f[i - 1]) / (2.0 * h);
        double fxx = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
        double bracket = fxx + nm1 * fx / x - nm1 * f[i] / (x * x);
        double s = fx + nm1 * f[i] / x;
        out[i] = flux.neg_dvalue(s) * u.q(f[i]) * bracket;
    });
}

void rhs_general_k(const classes::PnProblem& p, const Potential& u, const FluxFunction& flux,
                   const Grid& grid, std::span<const double> g, std::span<double> out,
                   Exec exec) {
    const int npts = grid.points;
    const double h = grid.spacing();
    const int n = p.n, k = p.k;
    const double pc = n + 1 - 2 * k;
    const double qc = double(k) * (n - k);
    const double c_km1 = binom_d(n - 1, k - 1);
    const double c_k = binom_d(n - 1, k);
    for (double gi : g)
        if (gi < 0.0) throw IntegrityError("g-variable state went negative");
    out[0] = out[npts - 1] = 0.0;
    run_interior(npts, exec, [&](int i) {
        double x = grid.x(i);
        double gx = (g[i + 1] - g[i - 1]) / (2.0 * h);
        double gxx = (g[i + 1] - 2.0 * g[i] + g[i - 1]) / (h * h);
        double bracket = gxx + pc * gx / x - qc * g[i] / (x * x);
        double f = kroot(g[i], k);
        double ratio = f / x;
        double fx = gx / (k * ipow(f, k - 1));
        double s = c_km1 * ipow(ratio, k - 1) * fx + c_k * ipow(ratio, k);
        double qg = c_km1 * ipow(ratio, k - 1) * u.q(f);
        out[i] = flux.neg_dvalue(s) * qg * bracket;
    });
}

void rhs_xmn(const classes::XmnProblem& p, const Potential& u, const FluxFunction& flux,
             const Grid& grid, std::span<const double> f, std::span<double> out,
             Exec exec) {
    const int npts = grid.points;
    const double h = grid.spacing();
    const SigmaTable table(p.n, p.m, p.k);
    for (double fi : f)
        if (fi < -1e-12) throw IntegrityError("f went negative on the bundle reduction");
    out[0] = out[npts - 1] = 0.0;
    run_interior(npts, exec, [&](int i) {
        double x = grid.x(i);
        double fx = (f[i + 1] - f[i - 1]) / (2.0 * h);
        double fxx = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
        double mu1 = (1.0 + f[i]) / (1.0 + x);
        double mu2 = p.m > 0 ? f[i] / x : 0.0;
        auto sp = table.partials(mu1, mu2, fx);
        double mu1x = (fx * (1.0 + x) - (1.0 + f[i])) / ((1.0 + x) * (1.0 + x));
        double mu2x = (fx * x - f[i]) / (x * x);
        double dsigma = sp.d_mu1 * mu1x + (p.m > 0 ? sp.d_mu2 * mu2x : 0.0) + sp.d_mu3 * fxx;
        out[i] = flux.neg_dvalue(sp.value) * u.q(std::max(f[i], 0.0)) * dsigma;
    });
}

void rhs(const FlowProblem& problem, const Potential& u, const Grid& grid,
         std::span<const double> w, std::span<double> out, Exec exec) {
    if (!problem.is_pn())
        rhs_xmn(problem.xmn(), u, problem.flux, grid, w, out, exec);
    else if (problem.pn().k == 1)
        rhs_jflow(problem.pn(), u, problem.flux, grid, w, out, exec);
    else
        rhs_general_k(problem.pn(), u, problem.flux, grid, w, out, exec);
}

std::vector<double> sigma_profile(const FlowProblem& problem, const Grid& grid,
                                  const FlowState& state) {
    const int npts = grid.points;
    const double h = grid.spacing();
    std::vector<double> sig(npts);
    int k = problem.is_pn() ? problem.pn().k : problem.xmn().k;
    std::vector<double> f = state.f_values(k);
    auto fx_at = [&](int i) {
        if (i == 0) return (f[1] - f[0]) / h;
        if (i == npts - 1) return (f[npts - 1] - f[npts - 2]) / h;
        return (f[i + 1] - f[i - 1]) / (2.0 * h);
    };
    if (problem.is_pn()) {
        const int n = problem.pn().n;
        for (int i = 0; i < npts; ++i) {
            double x = grid.x(i);
            sig[i] = sigma_grouped(n - 1, f[i] / x, 0, 0.0, fx_at(i), k);
        }
    } else {
        const auto& p = problem.xmn();
        const SigmaTable table(p.n, p.m, p.k);
        for (int i = 0; i < npts; ++i) {
            double x = grid.x(i);
            double fx = fx_at(i);
            double mu2 = x > 0.0 ? f[i] / x : fx;  // f/x tends to f'(0)
            sig[i] = table.value((1.0 + f[i]) / (1.0 + x), mu2, fx);
        }
    }
    return sig;
}

std::vector<double> sigma_derivative_gform(const classes::XmnProblem& p, const Grid& grid,
                                           std::span<const double> f) {
    // sigma_k equals d/dx[gk(f(x), x)] / g1'(x); differentiate that ratio
    // numerically instead of expanding the eigenvalue chain rule.
    const int npts = grid.points;
    const double h = grid.spacing();
    auto gk = gpoly::g_mnk(p.m, p.n, p.k);
    auto gk_df = gk.d_df();
    auto gk_dx = gk.d_dx();
    std::vector<double> sig(npts, 0.0);
    for (int i = 1; i < npts - 1; ++i) {
        double x = grid.x(i);
        double fx = (f[i + 1] - f[i - 1]) / (2.0 * h);
        double num = gk_df.eval(f[i], x) * fx + gk_dx.eval(f[i], x);
        double den = ipow(x, p.m) * ipow(1.0 + x, p.n);
        sig[i] = num / den;
    }
    std::vector<double> dsig(npts, 0.0);
    for (int i = 2; i < npts - 2; ++i) dsig[i] = (sig[i + 1] - sig[i - 1]) / (2.0 * h);
    return dsig;
}

std::vector<double> make_initial(const FlowProblem& problem, const Grid& grid,
                                 InitialData init) {
    std::vector<double> w(grid.points);
    double w_lo = problem.boundary_lo(), w_hi = problem.boundary_hi();
    if (init == InitialData::Chord) {
        for (int i = 0; i < grid.points; ++i)
            w[i] = w_lo + (w_hi - w_lo) * (grid.x(i) - grid.x_lo) / (grid.x_hi - grid.x_lo);
        return w;
    }
    if (init == InitialData::AnalyticLimit) {
        auto s = problem.analytic_limit();
        int k = problem.is_pn() ? problem.pn().k : 1;
        for (int i = 0; i < grid.points; ++i) {
            double f = s.eval(grid.x(i));
            w[i] = problem.variable() == Variable::G ? ipow(f, k) : f;
        }
        w.front() = w_lo;
        w.back() = w_hi;
        return w;
    }
    throw std::invalid_argument("make_initial: custom data must be supplied explicitly");
}

namespace {

// State-independent bound on the diffusion coefficient for the blown-up
// projective space reductions; valid for all times because the value range
// and the sigma range are both trapped by the initial data.
double diffusion_bound_pn(const classes::PnProblem& p, const Potential& u,
                          const FluxFunction& flux, double sigma_min) {
    double qmax = 0.25 * (u.hi() - u.lo());
    double factor = binom_d(p.n - 1, p.k - 1) * ipow(p.alpha, p.k - 1);
    return flux.neg_dvalue(sigma_min) * factor * qmax;
}

double diffusion_max_xmn(const classes::XmnProblem& p, const Potential& u,
                         const FluxFunction& flux, const Grid& grid,
                         std::span<const double> f) {
    const double h = grid.spacing();
    const SigmaTable table(p.n, p.m, p.k);
    double worst = 0.0;
    for (int i = 1; i < grid.points - 1; ++i) {
        double x = grid.x(i);
        double fx = (f[i + 1] - f[i - 1]) / (2.0 * h);
        double mu2 = p.m > 0 ? f[i] / x : 0.0;
        auto sp = table.partials((1.0 + f[i]) / (1.0 + x), mu2, fx);
        double d = flux.neg_dvalue(sp.value) * u.q(std::clamp(f[i], 0.0, u.hi())) * sp.d_mu3;
        worst = std::max(worst, std::abs(d));
    }
    return worst;
}

struct ThetaSolver {
    // Semi-implicit step for the linear bracket L w = w'' + p w'/x + q w/x^2.
    double pc, qc;
    std::vector<double> lower, diag, upper, rhs_vec;

    void step(const Grid& grid, std::span<const double> w, std::span<const double> dvals,
              std::span<const double> explicit_rhs, double dt, double theta,
              std::vector<double>& out) {
        const int npts = grid.points;
        const double h = grid.spacing();
        lower.assign(npts, 0.0);
        diag.assign(npts, 1.0);
        upper.assign(npts, 0.0);
        rhs_vec.assign(w.begin(), w.end());
        for (int i = 1; i < npts - 1; ++i) {
            double x = grid.x(i);
            double a = 1.0 / (h * h) - pc / (2.0 * h * x);
            double b = -2.0 / (h * h) + qc / (x * x);
            double c = 1.0 / (h * h) + pc / (2.0 * h * x);
            double s = dt * theta * dvals[i];
            lower[i] = -s * a;
            diag[i] = 1.0 - s * b;
            upper[i] = -s * c;
            rhs_vec[i] = w[i] + dt * (1.0 - theta) * explicit_rhs[i];
        }
        // Thomas elimination.
        for (int i = 1; i < npts; ++i) {
            double m = lower[i] / diag[i - 1];
            diag[i] -= m * upper[i - 1];
            rhs_vec[i] -= m * rhs_vec[i - 1];
        }
        out.resize(npts);
        out[npts - 1] = rhs_vec[npts - 1] / diag[npts - 1];
        for (int i = npts - 2; i >= 0; --i)
            out[i] = (rhs_vec[i] - upper[i] * out[i + 1]) / diag[i];
    }
};

}  // namespace

EvolveResult evolve(const FlowProblem& problem, const Grid& grid,
                    const SchemeConfig& scheme, InitialData init,
                    const std::vector<double>* custom_initial) {
    grid.validate();
    scheme.validate();
    if (problem.is_pn())
        problem.pn().validate();
    else
        problem.xmn().validate();
    if (!problem.is_pn() && scheme.theta > 0.0)
        throw std::invalid_argument("evolve: implicit stepping is limited to the Pn reductions");

    auto u = problem.make_potential();
    const int npts = grid.points;
    const double h = grid.spacing();
    const double w_lo = problem.boundary_lo();
    const double w_hi = problem.boundary_hi();
    const double flat = problem.flat_value();
    const int k = problem.is_pn() ? problem.pn().k : 1;

    std::vector<double> w;
    if (init == InitialData::Custom) {
        if (!custom_initial || int(custom_initial->size()) != npts)
            throw std::invalid_argument("evolve: custom initial data missing or mis-sized");
        w = *custom_initial;
        if (std::abs(w.front() - w_lo) > 1e-9 || std::abs(w.back() - w_hi) > 1e-9)
            throw std::invalid_argument("evolve: custom initial data violates boundary values");
        for (int i = 0; i + 1 < npts; ++i)
            if (w[i + 1] - w[i] < -1e-10)
                throw std::invalid_argument("evolve: custom initial data not monotone");
    } else {
        w = make_initial(problem, grid, init);
    }

    auto analytic = problem.analytic_limit();
    std::vector<double> f_analytic(npts);
    for (int i = 0; i < npts; ++i) f_analytic[i] = analytic.eval(grid.x(i));

    std::vector<double> rhs_vec(npts, 0.0), w_next(npts, 0.0);

    auto state_of = [&](const std::vector<double>& vals, double t) {
        FlowState s;
        s.t = t;
        s.variable = problem.variable();
        s.values = vals;
        return s;
    };

    auto sup_dist = [&](const std::vector<double>& vals) {
        double worst = 0.0;
        for (int i = 0; i < npts; ++i) {
            double f = (problem.variable() == Variable::G) ? kroot(vals[i], k) : vals[i];
            worst = std::max(worst, std::abs(f - f_analytic[i]));
        }
        return worst;
    };

    auto min_slope = [&](const std::vector<double>& vals) {
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 1; i + 1 < npts; ++i)
            worst = std::min(worst, (vals[i + 1] - vals[i - 1]) / (2.0 * h));
        return worst;
    };

    // Time step from an a-priori diffusion bound so paired runs share the
    // exact same discrete map whenever the bound is state-independent.
    rhs(problem, *u, grid, w, rhs_vec, scheme.exec);
    double dmax;
    if (problem.is_pn()) {
        auto sig0 = sigma_profile(problem, grid, state_of(w, 0.0));
        double smin = *std::min_element(sig0.begin(), sig0.end());
        dmax = diffusion_bound_pn(problem.pn(), *u, problem.flux, std::max(smin, 1e-6));
    } else {
        dmax = diffusion_max_xmn(problem.xmn(), *u, problem.flux, grid, w);
    }
    if (!(dmax > 0.0)) dmax = 1.0;
    double dt = scheme.cfl * h * h / (2.0 * dmax);
    const bool implicit = scheme.theta > 0.0;
    if (implicit) dt *= 32.0;  // the tridiagonal solve tolerates a larger step

    ThetaSolver theta_solver;
    std::vector<double> dvals;
    if (implicit) {
        const auto& p = problem.pn();
        theta_solver.pc = p.n + 1 - 2 * p.k;
        theta_solver.qc = -double(p.k) * (p.n - p.k);
    }

    EvolveResult result;
    result.dt = dt;
    double t = 0.0;
    long steps = 0;
    int below_count = 0;
    int halvings = 0;
    const long recheck_stride = 50;
    auto t_start = std::chrono::steady_clock::now();

    auto record = [&](double max_rhs) {
        auto sig = sigma_profile(problem, grid, state_of(w, t));
        Snapshot snap;
        snap.t = t;
        snap.sup_dist_analytic = sup_dist(w);
        snap.sigma_min = *std::min_element(sig.begin() + 1, sig.end() - 1);
        snap.sigma_max = *std::max_element(sig.begin() + 1, sig.end() - 1);
        snap.min_fx = min_slope(w);
        snap.max_rhs = max_rhs;
        result.series.push_back(snap);
    };

    double max_rhs = 0.0;
    for (double v : rhs_vec) max_rhs = std::max(max_rhs, std::abs(v));
    record(max_rhs);

    while (t < scheme.max_time) {
        if (implicit) {
            const auto& p = problem.pn();
            const double c_km1 = binom_d(p.n - 1, p.k - 1);
            const double c_k = binom_d(p.n - 1, p.k);
            dvals.assign(npts, 0.0);
            for (int i = 1; i < npts - 1; ++i) {
                double f = kroot(w[i], p.k);
                double x = grid.x(i);
                double gx = (w[i + 1] - w[i - 1]) / (2.0 * h);
                double fx = gx / (p.k * ipow(f, p.k - 1));
                double s = c_km1 * ipow(f / x, p.k - 1) * fx + c_k * ipow(f / x, p.k);
                double qg = c_km1 * ipow(f / x, p.k - 1) *
                            u->q(std::clamp(f, u->lo(), u->hi()));
                dvals[i] = problem.flux.neg_dvalue(s) * qg;
            }
            theta_solver.step(grid, w, dvals, rhs_vec, dt, scheme.theta, w_next);
        } else {
            for (int i = 0; i < npts; ++i) w_next[i] = w[i] + dt * rhs_vec[i];
        }
        w_next[0] = w_lo;
        w_next[npts - 1] = w_hi;

        bool bad = min_slope(w_next) < -1e-8;
        if (!bad) {
            double wf = problem.variable() == Variable::G ? 1.0 : flat;
            double margin = 1e-9 * (1.0 + std::abs(w_hi));
            for (double v : w_next)
                if (v < wf - margin || v > w_hi + margin) {
                    bad = true;
                    break;
                }
        }
        if (bad) {
            dt *= 0.5;
            ++halvings;
            if (halvings > 40)
                throw SchemeError("evolve: time step collapsed without restoring stability");
            continue;
        }

        std::swap(w, w_next);
        t += dt;
        ++steps;

        rhs(problem, *u, grid, w, rhs_vec, scheme.exec);
        max_rhs = 0.0;
        for (double v : rhs_vec) max_rhs = std::max(max_rhs, std::abs(v));
        if (max_rhs < scheme.steady_tol) {
            if (++below_count >= scheme.steady_hold) break;
        } else {
            below_count = 0;
        }

        if (!problem.is_pn() && steps % recheck_stride == 0) {
            double d = diffusion_max_xmn(problem.xmn(), *u, problem.flux, grid, w);
            double dt_limit = scheme.cfl * h * h / (2.0 * std::max(d, 1e-300));
            if (dt > dt_limit) dt = dt_limit;
        }

        if (steps % scheme.snapshot_stride == 0) record(max_rhs);
    }

    record(max_rhs);
    result.state = state_of(w, t);
    result.steps = steps;
    result.dt = dt;
    result.dt_halvings = halvings;
    result.final_residual = max_rhs;
    result.converged = below_count >= scheme.steady_hold;
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

}  // namespace isk::flow
