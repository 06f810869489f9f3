#include "isk/obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace isk::obstacle {

namespace {

double lw_at(const ObstacleProblem& p, std::span<const double> x,
             std::span<const double> w, double h, size_t i) {
    double wx = (w[i + 1] - w[i - 1]) / (2.0 * h);
    double wxx = (w[i + 1] - 2.0 * w[i] + w[i - 1]) / (h * h);
    return wxx + p.p_coeff() * wx / x[i] + p.q_coeff() * w[i] / (x[i] * x[i]);
}

}  // namespace

void ObstacleProblem::validate() const {
    if (n < 2) throw std::invalid_argument("ObstacleProblem: n >= 2");
    if (k < 1 || k > n) throw std::invalid_argument("ObstacleProblem: 1 <= k <= n");
    if (!(x_hi > x_lo)) throw std::invalid_argument("ObstacleProblem: degenerate interval");
    if (boundary_lo < obstacle || boundary_hi < obstacle)
        throw std::invalid_argument("ObstacleProblem: boundary values below the obstacle");
}

double energy(const ObstacleProblem& p, std::span<const double> w) {
    const size_t npts = w.size();
    const double h = (p.x_hi - p.x_lo) / double(npts - 1);
    const double pc = p.p_coeff(), qc = p.q_coeff();
    auto integrand = [&](size_t i) {
        double x = p.x_lo + double(i) * h;
        double wx;
        if (i == 0)
            wx = (w[1] - w[0]) / h;
        else if (i == npts - 1)
            wx = (w[npts - 1] - w[npts - 2]) / h;
        else
            wx = (w[i + 1] - w[i - 1]) / (2.0 * h);
        return std::pow(x, pc) * wx * wx - qc * std::pow(x, pc - 2.0) * w[i] * w[i];
    };
    double sum = 0.5 * (integrand(0) + integrand(npts - 1));
    for (size_t i = 1; i + 1 < npts; ++i) sum += integrand(i);
    return 0.5 * sum * h;
}

PsorResult solve_psor(const ObstacleProblem& p, int points, double omega_relax,
                      double tol, int max_sweeps) {
    p.validate();
    if (!(omega_relax > 0.0 && omega_relax < 2.0))
        throw std::invalid_argument("solve_psor: relaxation factor must lie in (0, 2)");
    if (points < 16) throw std::invalid_argument("solve_psor: need at least 16 points");

    PsorResult r;
    r.x.resize(points);
    r.values.resize(points);
    const double h = (p.x_hi - p.x_lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
        r.x[i] = p.x_lo + i * h;
        r.values[i] = p.boundary_lo +
                      (p.boundary_hi - p.boundary_lo) * (r.x[i] - p.x_lo) / (p.x_hi - p.x_lo);
        r.values[i] = std::max(r.values[i], p.obstacle);
    }
    r.x.back() = p.x_hi;

    auto& w = r.values;
    const double pc = p.p_coeff(), qc = p.q_coeff();
    double energy_ref = energy(p, w);
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        double delta = 0.0;
        for (int i = 1; i < points - 1; ++i) {
            double x = r.x[i];
            double a = 1.0 / (h * h) - pc / (2.0 * h * x);
            double c = 1.0 / (h * h) + pc / (2.0 * h * x);
            double b = -2.0 / (h * h) + qc / (x * x);
            double gs = -(a * w[i - 1] + c * w[i + 1]) / b;
            double next = std::max(p.obstacle, (1.0 - omega_relax) * w[i] + omega_relax * gs);
            delta = std::max(delta, std::abs(next - w[i]));
            w[i] = next;
        }
        r.sweeps = sweep;
        r.final_update = delta;
        if (delta < tol) return r;
        if (sweep % 100 == 0) {
            double e = energy(p, w);
            if (e > energy_ref + 1e-12 * (1.0 + std::abs(energy_ref)))
                throw RelaxationError("solve_psor: energy increased over a sweep window");
            energy_ref = e;
        }
    }
    throw RelaxationError("solve_psor: sweep budget exhausted before reaching tolerance");
}

Complementarity complementarity_residual(const ObstacleProblem& p,
                                         std::span<const double> x,
                                         std::span<const double> w) {
    Complementarity c;
    const double h = (p.x_hi - p.x_lo) / double(x.size() - 1);
    for (size_t i = 0; i < w.size(); ++i)
        c.max_violation = std::max(c.max_violation, p.obstacle - w[i]);
    for (size_t i = 1; i + 1 < w.size(); ++i) {
        double lw = lw_at(p, x, w, h, i);
        if (w[i] > p.obstacle + 1e-6)
            c.max_residual_free = std::max(c.max_residual_free, std::abs(lw));
        else
            c.max_positive_contact = std::max(c.max_positive_contact, lw);
    }
    return c;
}

double contact_point(const ObstacleProblem& p, std::span<const double> x,
                     std::span<const double> w, double tol) {
    const double thresh = p.obstacle + 10.0 * tol;
    size_t last = 0;
    bool any = false;
    for (size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i] <= thresh) {
            last = i;
            any = true;
        }
    if (!any || last + 2 >= w.size()) return p.x_lo;
    double s1 = std::sqrt(std::max(w[last + 1] - p.obstacle, 0.0));
    double s2 = std::sqrt(std::max(w[last + 2] - p.obstacle, 0.0));
    if (s2 <= s1) return x[last];
    double lam = x[last + 1] - s1 * (x[last + 2] - x[last + 1]) / (s2 - s1);
    return std::clamp(lam, x[last], x[last + 1]);
}

void export_csv(const ObstacleProblem& p, std::span<const double> x,
                std::span<const double> w, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_csv: cannot open " + path);
    out << "x,w,Lw,contact\n";
    out.precision(17);
    const double h = (p.x_hi - p.x_lo) / double(x.size() - 1);
    for (size_t i = 0; i < x.size(); ++i) {
        double lw = (i == 0 || i + 1 == x.size()) ? 0.0 : lw_at(p, x, w, h, i);
        out << x[i] << ',' << w[i] << ',' << lw << ','
            << (w[i] <= p.obstacle + 1e-6 ? 1 : 0) << '\n';
    }
}

}  // namespace isk::obstacle
