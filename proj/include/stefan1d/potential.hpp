#pragma once

#include "stefan1d/measure.hpp"

#include <string>
#include <vector>

namespace stefan1d {

/// a*y^2 + b*y + c
struct Quadratic {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double operator()(double y) const { return (a * y + b) * y + c; }
    double slope(double y) const { return 2.0 * a * y + b; }
};

/// slope*y + intercept
struct Linear {
    double slope = 0.0;
    double intercept = 0.0;

    double operator()(double y) const { return slope * y + intercept; }
};

/**
 * Continuous piecewise-linear function on the real line.
 *
 * pieces[0] covers (-inf, breakpoints[0]], pieces[i] covers
 * [breakpoints[i-1], breakpoints[i]], and pieces.back() the right tail.
 */
struct PiecewiseLinear {
    std::vector<double> breakpoints;
    std::vector<Linear> pieces{Linear{}};

    double operator()(double y) const;
    PiecewiseLinear operator-(const PiecewiseLinear& other) const;

    /// Zeros on the open interval (lo, hi), each isolated zero once. Pieces that
    /// vanish identically contribute both of their endpoints.
    std::vector<double> roots_in(double lo, double hi, double tol = 1e-14) const;
};

/// Same piece layout as PiecewiseLinear, with quadratic pieces.
struct PiecewiseQuadratic {
    std::vector<double> breakpoints;
    std::vector<Quadratic> pieces{Quadratic{}};

    std::size_t piece_index(double y) const;
    double operator()(double y) const;
    double derivative(double y) const;

    PiecewiseLinear derivative_function() const;
    PiecewiseQuadratic operator-(const PiecewiseQuadratic& other) const;

    /// Largest jump in value or first derivative across a breakpoint.
    double c1_defect() const;

    struct Extremum {
        double point = 0.0;
        double value = 0.0;
    };
    /// Exact supremum over the closed interval [lo, hi] (may be infinite).
    /// Tails whose slope magnitude is <= flat_slope count as constant.
    Extremum max_on(double lo, double hi, double flat_slope = 0.0) const;
    Extremum min_on(double lo, double hi) const;
};

/// Fundamental solution with Delta N = -delta_0, evaluated at distance r = |y|.
/// d = 1: -r/2; d = 2: -2*pi*log r; d = 3: r^{2-d} / (d (d-2) omega_d).
double kernel(int dimension, double r);

/// U^mu(y) = -1/2 * integral |y - x| dmu(x), exactly.
PiecewiseQuadratic potential(const StepMeasure& mu);

/// (U^mu)'(y) = (mu(y, inf) - mu(-inf, y)) / 2.
PiecewiseLinear potential_derivative(const StepMeasure& mu);

struct ComponentCertificate {
    Interval component;
    bool ordered = false;
    double mass_gap = 0.0;
    double moment_gap = 0.0;
    double worst_point = 0.0;
    double worst_gap = 0.0;
};

/**
 * Outcome of comparing U^mu against U^nu.
 *
 * worst_gap is sup_y (U^nu - U^mu)(y), computed piece by piece from exact
 * coefficients. It is +inf when the masses differ, since the tails then have
 * different slopes.
 */
struct OrderCertificate {
    bool ordered = false;
    double mass_gap = 0.0;
    double moment_gap = 0.0;
    double worst_point = 0.0;
    double worst_gap = 0.0;
    std::vector<ComponentCertificate> per_component;
    std::vector<std::string> assumptions;
    /// Reason for ordered == false that the gap fields alone do not show.
    std::string violation;
};

/// mu <=_SH nu test on the whole line: equal mass, equal first moment and
/// U^nu <= U^mu everywhere.
OrderCertificate dominates(const StepMeasure& mu, const StepMeasure& nu, double tol = kDefaultTol);

/// mu <=_SH,O nu in one dimension: every component of O must conserve mass and
/// first moment separately and satisfy the potential inequality. Throws
/// SupportError if either measure leaks out of O.
OrderCertificate order_leq_sh_O(const StepMeasure& mu, const StepMeasure& nu,
                                const OpenSet1D& domain, double tol = kDefaultTol);

} // namespace stefan1d
