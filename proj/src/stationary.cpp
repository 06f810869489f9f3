#include "isk/stationary.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "isk/roots.hpp"
#include "isk/sigma.hpp"

namespace isk::stationary {

namespace {

double binom_d(int n, int k) { return to_double(Rational(binomial(n, k))); }

// Solve gk(f, x) = target for f >= 0; gk is strictly increasing in f there.
double invert_gk(const gpoly::BivariatePoly& gk, double x, double target, double f_hint) {
    if (target <= gk.eval(0.0, x)) return 0.0;
    double hi = std::max(f_hint, 1e-3);
    int guard = 0;
    while (gk.eval(hi, x) < target) {
        hi *= 2.0;
        if (++guard > 200) throw std::runtime_error("invert_gk: bracket expansion failed");
    }
    return bisect([&](double f) { return gk.eval(f, x) - target; }, 0.0, hi, 1e-12);
}

}  // namespace

double StationaryProfile::eval(double x) const {
    if (x < x_lo - 1e-12 || x > x_hi + 1e-12)
        throw std::domain_error("StationaryProfile::eval: x outside domain");
    if (x <= lambda) return flat_value;
    if (family == Family::Pn) {
        double g = a * std::pow(x, k) + b * std::pow(x, k - n);
        return std::pow(g, 1.0 / k);
    }
    double target = alpha * g1.eval(0.0, x) + beta;
    return invert_gk(gk, x, target, branch_hint);
}

double StationaryProfile::deriv(double x) const {
    if (x < x_lo - 1e-12 || x > x_hi + 1e-12)
        throw std::domain_error("StationaryProfile::deriv: x outside domain");
    if (x <= lambda) return 0.0;
    if (family == Family::Pn) {
        double g = a * std::pow(x, k) + b * std::pow(x, k - n);
        double gp = k * a * std::pow(x, k - 1) + (k - n) * b * std::pow(x, k - n - 1);
        double f = std::pow(g, 1.0 / k);
        return gp / (k * std::pow(f, k - 1));
    }
    double f = eval(x);
    double num = alpha * g1_dx.eval(0.0, x) - gk_dx.eval(f, x);
    double den = gk_df.eval(f, x);
    return num / den;
}

double StationaryProfile::sigma(double x) const {
    double f = eval(x);
    double fp = deriv(x);
    if (family == Family::Pn) return sigma_grouped(n - 1, f / x, 0, 0.0, fp, k);
    return sigma_grouped(n, (1.0 + f) / (1.0 + x), m, f / x, fp, k);
}

double solve_lambda_pn(const classes::PnProblem& p) {
    auto label = classes::classify_pn(p);
    if (label.variant == classes::Variant::Smooth)
        throw std::invalid_argument("solve_lambda_pn: class admits a smooth critical metric");
    if (label.variant == classes::Variant::ConicBoundary) return 1.0;
    double rhs = p.n * std::pow(p.alpha, p.k);
    auto h = [&](double l) {
        return (p.n - p.k) * std::pow(p.beta / l, p.k) +
               p.k * std::pow(l / p.beta, p.n - p.k) - rhs;
    };
    double root = bisect(h, 1.0, p.beta, 1e-12);
    if (!(root > 1.0 && root < p.beta))
        throw std::runtime_error("solve_lambda_pn: root escaped (1, beta)");
    return root;
}

StationaryProfile stationary_pn(const classes::PnProblem& p) {
    p.validate();
    StationaryProfile s;
    s.family = StationaryProfile::Family::Pn;
    s.n = p.n;
    s.k = p.k;
    s.x_lo = 1.0;
    s.x_hi = p.beta;
    s.flat_value = 1.0;

    auto label = classes::classify_pn(p);
    if (label.variant != classes::Variant::CurrentBlowup) {
        double ak = std::pow(p.alpha, p.k);
        double bn = std::pow(p.beta, p.n);
        double abk = ak * std::pow(p.beta, p.n - p.k);
        s.lambda = 1.0;
        s.a = (abk - 1.0) / (bn - 1.0);
        s.b = (bn - abk) / (bn - 1.0);
    } else {
        s.lambda = solve_lambda_pn(p);
        // g(lambda)=1 and g'(lambda)=0 give the split a*l^k=(n-k)/n, b*l^{k-n}=k/n.
        s.a = double(p.n - p.k) / (p.n * std::pow(s.lambda, p.k));
        s.b = double(p.k) * std::pow(s.lambda, p.n - p.k) / p.n;
    }
    s.sigma_constant = binom_d(p.n, p.k) * s.a;
    return s;
}

XmnSystem solve_xmn_system(const classes::XmnProblem& p) {
    p.validate();
    double ck = gpoly::topological_constant_xmn(p.m, p.n, p.k, p.b, p.b_prime);
    auto label = classes::classify_xmn(p, ck);
    if (label.variant != classes::Variant::CurrentBlowup) return {ck, 0.0, 0.0, false};

    auto g1 = gpoly::g_mn(p.m, p.n);
    auto a0 = gpoly::g_mn(p.m, p.n - p.k) * Rational(binomial(p.n, p.k));
    double gk_bb = gpoly::g_mnk(p.m, p.n, p.k).eval(p.b, p.b_prime);
    double g1_b = g1.eval(0.0, p.b_prime);
    double cnk = binom_d(p.n, p.k);

    // The first two conditions give alpha and beta in closed form per lambda;
    // the third becomes a scalar residual.
    auto alpha_of = [&](double l) { return cnk * std::pow(1.0 + l, -p.k); };
    auto beta_of = [&](double l) { return a0.eval(0.0, l) - alpha_of(l) * g1.eval(0.0, l); };
    auto residual = [&](double l) {
        return gk_bb - alpha_of(l) * g1_b - beta_of(l);
    };

    const int scan = 64;
    XmnSystem out;
    double prev_x = 0.0, prev_r = residual(0.0);
    double lo = -1.0, hi = -1.0;
    int sign_changes = 0;
    for (int i = 1; i <= scan; ++i) {
        double x = p.b_prime * i / scan;
        double r = residual(x);
        if (prev_r == 0.0 || std::signbit(r) != std::signbit(prev_r)) {
            ++sign_changes;
            if (lo < 0.0) {
                lo = prev_x;
                hi = x;
            }
        }
        prev_x = x;
        prev_r = r;
    }
    if (lo < 0.0)
        throw std::runtime_error("solve_xmn_system: no sign change of residual in (0, b')");
    out.multiple_brackets = sign_changes > 1;
    out.lambda = bisect(residual, lo, hi, 1e-12);
    out.alpha = alpha_of(out.lambda);
    out.beta = beta_of(out.lambda);
    if (!(out.lambda > 0.0 && out.lambda < p.b_prime))
        throw std::runtime_error("solve_xmn_system: lambda escaped (0, b')");
    return out;
}

StationaryProfile stationary_xmn(const classes::XmnProblem& p) {
    p.validate();
    StationaryProfile s;
    s.family = StationaryProfile::Family::Xmn;
    s.n = p.n;
    s.k = p.k;
    s.m = p.m;
    s.x_lo = 0.0;
    s.x_hi = p.b_prime;
    s.flat_value = 0.0;
    s.gk = gpoly::g_mnk(p.m, p.n, p.k);
    s.gk_df = s.gk.d_df();
    s.gk_dx = s.gk.d_dx();
    s.g1 = gpoly::g_mn(p.m, p.n);
    s.g1_dx = s.g1.d_dx();
    s.branch_hint = p.b;

    auto sys = solve_xmn_system(p);
    s.alpha = sys.alpha;
    s.beta = sys.beta;
    s.lambda = sys.lambda;
    s.sigma_constant = sys.alpha;
    return s;
}

double stationary_residual(const StationaryProfile& s, std::span<const double> xs) {
    double worst = 0.0;
    for (double x : xs) {
        if (x <= s.lambda + 1e-9 || x <= s.x_lo + 1e-12) continue;
        worst = std::max(worst, std::abs(s.sigma(x) - s.sigma_constant));
    }
    return worst;
}

void export_csv(const StationaryProfile& s, int points, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_csv: cannot open " + path);
    out << "x,f,fprime\n";
    out.precision(17);
    for (int i = 0; i < points; ++i) {
        double x = s.x_lo + (s.x_hi - s.x_lo) * i / (points - 1);
        out << x << ',' << s.eval(x) << ',' << s.deriv(x) << '\n';
    }
}

}  // namespace isk::stationary
