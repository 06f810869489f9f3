#include "isk/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "isk/roots.hpp"

namespace isk::diagnostics {

namespace {

struct LineFit {
    double slope = 0, intercept = 0, r2 = 0;
};

LineFit least_squares(std::span<const double> xs, std::span<const double> ys) {
    double n = double(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    LineFit fit;
    double den = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double e = ys[i] - (fit.slope * xs[i] + fit.intercept);
        ss_res += e * e;
    }
    fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

}  // namespace

std::vector<double> uniform_rho_grid(double r, int points) {
    std::vector<double> rho(points);
    for (int i = 0; i < points; ++i) rho[i] = -r + 2.0 * r * i / (points - 1);
    return rho;
}

RadialCurve reconstruct_vprime(std::span<const double> x, std::span<const double> f,
                               const potential::Potential& u,
                               std::span<const double> rho) {
    RadialCurve c;
    c.rho.assign(rho.begin(), rho.end());
    c.vprime.resize(rho.size());
    for (size_t r = 0; r < rho.size(); ++r) {
        double y = u.uprime(rho[r]);
        if (y <= f.front()) {
            c.vprime[r] = x.front();
            if (y < f.front() - 1e-12) c.clipped = true;
            continue;
        }
        if (y >= f.back()) {
            c.vprime[r] = x.back();
            if (y > f.back() + 1e-12) c.clipped = true;
            continue;
        }
        // upper_bound lands past any flat run, so inversion picks the
        // rightmost preimage of y
        auto it = std::upper_bound(f.begin(), f.end(), y);
        size_t i = size_t(it - f.begin());
        double f0 = f[i - 1], f1 = f[i];
        double t = f1 > f0 ? (y - f0) / (f1 - f0) : 0.0;
        c.vprime[r] = x[i - 1] + t * (x[i] - x[i - 1]);
    }
    return c;
}

RadialCurve reconstruct_vprime(const std::function<double(double)>& f, double x_lo,
                               double x_hi, const potential::Potential& u,
                               std::span<const double> rho) {
    RadialCurve c;
    c.rho.assign(rho.begin(), rho.end());
    c.vprime.resize(rho.size());
    double f_lo = f(x_lo), f_hi = f(x_hi);
    for (size_t r = 0; r < rho.size(); ++r) {
        double y = u.uprime(rho[r]);
        if (y <= f_lo) {
            c.vprime[r] = x_lo;
            continue;
        }
        if (y >= f_hi) {
            c.vprime[r] = x_hi;
            continue;
        }
        c.vprime[r] = bisect([&](double x) { return f(x) - y; }, x_lo, x_hi, 1e-15);
    }
    return c;
}

ConeFit fit_cone_exponent(const RadialCurve& curve, double lambda) {
    std::vector<double> xs, ys;
    for (size_t i = 0; i < curve.rho.size(); ++i) {
        double d = curve.vprime[i] - lambda;
        if (d > 1e-8 && d < 1e-2) {
            xs.push_back(curve.rho[i]);
            ys.push_back(std::log(d));
        }
    }
    if (xs.size() < 5)
        throw InsufficientResolution(
            "fit_cone_exponent: fewer than 5 samples in the asymptotic window");
    auto fit = least_squares(xs, ys);
    ConeFit out;
    out.exponent = fit.slope;
    out.coefficient = std::exp(fit.intercept);
    out.r2 = fit.r2;
    out.samples = int(xs.size());
    return out;
}

OscPole oscillation_and_pole(const RadialCurve& limit, const RadialCurve& initial) {
    if (limit.rho.size() != initial.rho.size())
        throw std::invalid_argument("oscillation_and_pole: curves on different grids");
    const size_t npts = limit.rho.size();
    std::vector<double> phi(npts, 0.0);
    for (size_t i = 1; i < npts; ++i) {
        double h = limit.rho[i] - limit.rho[i - 1];
        double d0 = limit.vprime[i - 1] - initial.vprime[i - 1];
        double d1 = limit.vprime[i] - initial.vprime[i];
        phi[i] = phi[i - 1] + 0.5 * h * (d0 + d1);
    }
    size_t tail = std::max<size_t>(npts / 10, 3);
    double tail_mean = 0;
    for (size_t i = npts - tail; i < npts; ++i)
        tail_mean += limit.vprime[i] - initial.vprime[i];
    tail_mean /= double(tail);
    if (std::abs(tail_mean) > 1e-3)
        throw ClassMismatch(
            "oscillation_and_pole: potential difference keeps growing at +infinity");

    OscPole out;
    auto [mn, mx] = std::minmax_element(phi.begin(), phi.end());
    out.osc = *mx - *mn;
    size_t head = std::max<size_t>(npts / 4, 5);
    auto fit = least_squares(std::span(limit.rho).first(head), std::span(phi).first(head));
    out.pole_coeff = fit.slope;
    return out;
}

TraceProfile trace_profile(std::span<const double> x, std::span<const double> f,
                           const potential::Potential& u, std::span<const double> rho,
                           int n, int m, bool bundle) {
    auto curve = reconstruct_vprime(x, f, u, rho);
    const double h = x[1] - x[0];
    TraceProfile out;
    out.values.resize(rho.size(), 0.0);
    out.blown_up.resize(rho.size(), 0);
    auto slope_at = [&](double xv) {
        double pos = (xv - x.front()) / h;
        size_t i = std::clamp<size_t>(size_t(std::lround(pos)), 1, x.size() - 2);
        return (f[i + 1] - f[i - 1]) / (2.0 * h);
    };
    for (size_t r = 0; r < rho.size(); ++r) {
        double xv = curve.vprime[r];
        double fv = u.uprime(rho[r]);
        double fx = slope_at(xv);
        if (fx < 1e-12) {
            out.blown_up[r] = 1;
            continue;
        }
        if (bundle)
            out.values[r] = n * (1.0 + xv) / (1.0 + fv) +
                            (m > 0 ? m * xv / std::max(fv, 1e-300) : 0.0) + 1.0 / fx;
        else
            out.values[r] = (n - 1) * xv / fv + 1.0 / fx;
    }
    return out;
}

double lambda_estimate(const RadialCurve& curve) { return curve.vprime.front(); }

double inversion_defect(const RadialCurve& curve, std::span<const double> x,
                        std::span<const double> f, const potential::Potential& u) {
    const double h = x[1] - x[0];
    double worst = 0.0;
    for (size_t r = 0; r < curve.rho.size(); ++r) {
        double y = u.uprime(curve.rho[r]);
        if (y <= f.front() || y >= f.back()) continue;  // clipped samples
        double pos = (curve.vprime[r] - x.front()) / h;
        size_t i = std::clamp<size_t>(size_t(pos), 0, x.size() - 2);
        double t = pos - double(i);
        double fv = f[i] * (1.0 - t) + f[i + 1] * t;
        worst = std::max(worst, std::abs(fv - y));
    }
    return worst;
}

}  // namespace isk::diagnostics
