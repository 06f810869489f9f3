#pragma once

#include <functional>
#include <string>
#include <vector>

namespace isk::potential {

/// Radial potential seen through its derivative u'(rho): monotone increasing
/// from lo at rho -> -inf to hi at rho -> +inf, with u'' > 0 everywhere.
class Potential {
  public:
    virtual ~Potential() = default;
    virtual double lo() const = 0;
    virtual double hi() const = 0;
    virtual double uprime(double rho) const = 0;
    virtual double usecond(double rho) const = 0;
    /// Diffusion factor Q(y) = u''(u'^{-1}(y)), defined on [lo, hi].
    virtual double q(double y) const = 0;
    /// Inverse of u'; returns +-inf for y at or beyond the limits.
    virtual double invert_uprime(double y) const = 0;
};

/// Default closed-form family u'(rho) = (lo + hi e^rho) / (1 + e^rho), which
/// has Q(y) = (y-lo)(hi-y)/(hi-lo) and a logarithmic inverse.
class PotentialProfile final : public Potential {
  public:
    PotentialProfile(double lo, double hi);
    double lo() const override { return lo_; }
    double hi() const override { return hi_; }
    double uprime(double rho) const override;
    double usecond(double rho) const override;
    double q(double y) const override;
    double invert_uprime(double y) const override;

  private:
    double lo_;
    double hi_;
};

/// Tabulated (rho, u') profile loaded from CSV; piecewise-linear u' with
/// strictly increasing values. Q is piecewise constant from segment slopes.
class TabulatedPotential final : public Potential {
  public:
    TabulatedPotential(std::vector<double> rho, std::vector<double> uprime);
    static TabulatedPotential load_csv(const std::string& path);
    double lo() const override { return up_.front(); }
    double hi() const override { return up_.back(); }
    double uprime(double rho) const override;
    double usecond(double rho) const override;
    double q(double y) const override;
    double invert_uprime(double y) const override;

  private:
    std::vector<double> rho_;
    std::vector<double> up_;
};

struct FluxFunction {
    enum class Kind { NegIdentity, NegLog, Custom };
    Kind kind = Kind::NegIdentity;
    std::function<double(double)> custom;

    static FluxFunction neg_identity() { return {Kind::NegIdentity, {}}; }
    static FluxFunction neg_log() { return {Kind::NegLog, {}}; }
    static FluxFunction make_custom(std::function<double(double)> f) {
        return {Kind::Custom, std::move(f)};
    }

    double value(double x) const;
    /// -F'(x) > 0 is the only way the flux enters the reduced flows.
    double neg_dvalue(double x) const;
};

struct FluxReport {
    bool pass = false;
    double max_fprime = 0;        // should be < 0
    double min_fsecond = 0;       // should be >= 0
    double max_combined = 0;      // F'' + F'/x, should be <= 0
    std::string message;
};

/// Finite-difference audit of the monotonicity/convexity conditions on F
/// over [x_lo, x_hi] at the given number of sample points.
FluxReport validate_flux(const FluxFunction& flux, double x_lo, double x_hi,
                         int samples, double tol = 1e-7);

}  // namespace isk::potential
