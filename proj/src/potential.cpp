#include "isk/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace isk::potential {

PotentialProfile::PotentialProfile(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(hi > lo) || lo < 0.0)
        throw std::invalid_argument("PotentialProfile: need hi > lo >= 0");
}

double PotentialProfile::uprime(double rho) const {
    // Evaluated from whichever side keeps the exponential bounded.
    if (rho <= 0.0) {
        double e = std::exp(rho);
        return (lo_ + hi_ * e) / (1.0 + e);
    }
    double e = std::exp(-rho);
    return (lo_ * e + hi_) / (e + 1.0);
}

double PotentialProfile::usecond(double rho) const {
    double e = std::exp(-std::abs(rho));
    double denom = (1.0 + e) * (1.0 + e);
    return (hi_ - lo_) * e / denom;
}

double PotentialProfile::q(double y) const {
    if (y < lo_ - 1e-12 || y > hi_ + 1e-12)
        throw std::domain_error("PotentialProfile::q: y outside [lo, hi]");
    y = std::clamp(y, lo_, hi_);
    return (y - lo_) * (hi_ - y) / (hi_ - lo_);
}

double PotentialProfile::invert_uprime(double y) const {
    if (y <= lo_) return -std::numeric_limits<double>::infinity();
    if (y >= hi_) return std::numeric_limits<double>::infinity();
    return std::log((y - lo_) / (hi_ - y));
}

TabulatedPotential::TabulatedPotential(std::vector<double> rho, std::vector<double> uprime)
    : rho_(std::move(rho)), up_(std::move(uprime)) {
    if (rho_.size() != up_.size() || rho_.size() < 2)
        throw std::invalid_argument("TabulatedPotential: need >= 2 matching samples");
    for (size_t i = 1; i < rho_.size(); ++i) {
        if (!(rho_[i] > rho_[i - 1]))
            throw std::invalid_argument("TabulatedPotential: rho not strictly increasing");
        if (!(up_[i] > up_[i - 1]))
            throw std::invalid_argument("TabulatedPotential: u' not strictly increasing");
    }
    if (up_.front() < 0.0)
        throw std::invalid_argument("TabulatedPotential: u' must be nonnegative");
}

TabulatedPotential TabulatedPotential::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("TabulatedPotential: cannot open " + path);
    std::vector<double> rho, up;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double r, u;
        if (!(ls >> r >> u)) {
            if (rho.empty()) continue;  // header row
            throw std::runtime_error("TabulatedPotential: malformed row: " + line);
        }
        rho.push_back(r);
        up.push_back(u);
    }
    return TabulatedPotential(std::move(rho), std::move(up));
}

double TabulatedPotential::uprime(double rho) const {
    if (rho <= rho_.front()) return up_.front();
    if (rho >= rho_.back()) return up_.back();
    auto it = std::upper_bound(rho_.begin(), rho_.end(), rho);
    size_t i = size_t(it - rho_.begin());
    double w = (rho - rho_[i - 1]) / (rho_[i] - rho_[i - 1]);
    return up_[i - 1] + w * (up_[i] - up_[i - 1]);
}

double TabulatedPotential::usecond(double rho) const {
    if (rho <= rho_.front() || rho >= rho_.back()) return 0.0;
    auto it = std::upper_bound(rho_.begin(), rho_.end(), rho);
    size_t i = size_t(it - rho_.begin());
    return (up_[i] - up_[i - 1]) / (rho_[i] - rho_[i - 1]);
}

double TabulatedPotential::q(double y) const {
    if (y < lo() - 1e-12 || y > hi() + 1e-12)
        throw std::domain_error("TabulatedPotential::q: y outside [lo, hi]");
    if (y <= lo() || y >= hi()) return 0.0;
    auto it = std::upper_bound(up_.begin(), up_.end(), y);
    size_t i = size_t(it - up_.begin());
    return (up_[i] - up_[i - 1]) / (rho_[i] - rho_[i - 1]);
}

double TabulatedPotential::invert_uprime(double y) const {
    if (y <= lo()) return -std::numeric_limits<double>::infinity();
    if (y >= hi()) return std::numeric_limits<double>::infinity();
    auto it = std::upper_bound(up_.begin(), up_.end(), y);
    size_t i = size_t(it - up_.begin());
    double w = (y - up_[i - 1]) / (up_[i] - up_[i - 1]);
    return rho_[i - 1] + w * (rho_[i] - rho_[i - 1]);
}

double FluxFunction::value(double x) const {
    switch (kind) {
        case Kind::NegIdentity: return -x;
        case Kind::NegLog: return -std::log(x);
        case Kind::Custom: return custom(x);
    }
    return 0.0;
}

double FluxFunction::neg_dvalue(double x) const {
    switch (kind) {
        case Kind::NegIdentity: return 1.0;
        case Kind::NegLog: return 1.0 / x;
        case Kind::Custom: {
            double h = std::max(1e-6, 1e-6 * x);
            return -(custom(x + h) - custom(x - h)) / (2.0 * h);
        }
    }
    return 0.0;
}

FluxReport validate_flux(const FluxFunction& flux, double x_lo, double x_hi,
                         int samples, double tol) {
    if (!(x_lo > 0.0) || !(x_hi > x_lo))
        throw std::invalid_argument("validate_flux: need 0 < x_lo < x_hi");
    if (samples < 3) throw std::invalid_argument("validate_flux: samples must be >= 3");

    FluxReport rep;
    rep.max_fprime = -std::numeric_limits<double>::infinity();
    rep.min_fsecond = std::numeric_limits<double>::infinity();
    rep.max_combined = -std::numeric_limits<double>::infinity();
    double scale = 1.0;  // derivative magnitudes, so tol acts relatively
    for (int i = 0; i < samples; ++i) {
        double x = x_lo + (x_hi - x_lo) * i / (samples - 1);
        double h = std::max(1e-4 * x, 1e-7);
        if (x - h <= 0.0) h = 0.5 * x;
        double fm = flux.value(x - h), f0 = flux.value(x), fp = flux.value(x + h);
        if (!std::isfinite(fm) || !std::isfinite(f0) || !std::isfinite(fp)) {
            rep.pass = false;
            rep.message = "non-finite flux value near x=" + std::to_string(x);
            return rep;
        }
        double d1 = (fp - fm) / (2.0 * h);
        double d2 = (fp - 2.0 * f0 + fm) / (h * h);
        rep.max_fprime = std::max(rep.max_fprime, d1);
        rep.min_fsecond = std::min(rep.min_fsecond, d2);
        rep.max_combined = std::max(rep.max_combined, d2 + d1 / x);
        scale = std::max({scale, std::abs(d1) / x, std::abs(d2)});
    }
    rep.pass = rep.max_fprime < -tol && rep.min_fsecond >= -tol * scale &&
               rep.max_combined <= tol * scale;
    if (!rep.pass && rep.message.empty()) rep.message = "concavity conditions violated";
    return rep;
}

}  // namespace isk::potential
