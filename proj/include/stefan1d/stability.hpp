#pragma once

#include "stefan1d/maximal.hpp"
#include "stefan1d/measure.hpp"

#include <span>
#include <vector>

namespace stefan1d {

/// mu1 = r chi_(-x, x), mu2 = chi_(-c, -c + r y) + r chi_(-x, x - y) on (-1, 1).
struct LipschitzFamilyParams {
    double x = 0.0;
    double y = 0.0;
    double r = 0.0;
    double c = 0.0;

    /// Throws ParameterError unless 0 < x < 1, 0 < y < 2x, 0 < r < 1,
    /// 0 < c < 1 and -c + r y < -x.
    void validate() const;

    StepMeasure first() const;
    StepMeasure second() const;

    /// ||(nu1 - nu2)_+|| = (2rxy + 2cry - ry^2 - r^2y^2) / (2 (2 - 2rx)).
    double closed_form_output_gap() const;
    /// (2x + 2c - y - ry) / (4 (1 - rx)); defined for any parameters with rx != 1.
    double closed_form_ratio() const;
    /// y -> 0 limit of the ratio: (x + c) / (2 (1 - rx)).
    double limiting_ratio() const;

    /// The closed forms assume the inner gap of nu2 is a shift of the gap of
    /// nu1 by less than its own width 2 - 2rx. Past that the true output gap
    /// saturates at 2 - 2rx.
    bool in_closed_form_regime() const;
};

struct StabilityReport {
    double input_l1_gap = 0.0;    // ||(mu1 - mu2)_+||
    double output_l1_gap = 0.0;   // ||(nu1 - nu2)_+||
    double ratio = 0.0;           // output / input, 0 when input gap is 0
    bool monotone_in = false;     // mu1 <= mu2
    bool monotone_out = false;    // nu1 <= nu2
    double closed_form_ratio = 0.0;
    double closed_form_output_gap = 0.0;
    MaximalSolution first;
    MaximalSolution second;
};

/// Throws AdmissibilityError / SupportError when an input is not admissible on O.
StabilityReport monotonicity_report(const StepMeasure& mu1, const StepMeasure& mu2, const OpenSet1D& domain,
                                    double tol = kDefaultTol);

/// Solves both family members on (-1, 1) and measures the L1 gaps. The
/// closed-form fields are filled from the formulas for cross-checking.
StabilityReport lipschitz_ratio(const LipschitzFamilyParams& params, double tol = kDefaultTol);

struct WeakConvergenceRow {
    std::size_t index = 0;
    double mass_gap = 0.0;     // sum over components of |k_l - k|
    double moment_gap = 0.0;   // sum over components of |beta_l - beta|
    double l1_gap = 0.0;       // integral of |nu_l - nu|
    double bound = 0.0;        // constant * (mass_gap + moment_gap)
};

struct WeakConvergenceTable {
    std::vector<WeakConvergenceRow> rows;
    /// Lipschitz constant of the endpoint map over the family, used for `bound`.
    double constant = 0.0;
    bool bounded = false;      // l1_gap <= bound on every row
};

/// Row l compares solve(sequence[l]) with solve(limit). Throws if any member is
/// not admissible on O.
WeakConvergenceTable weak_convergence_experiment(std::span<const StepMeasure> sequence,
                                                 const StepMeasure& limit, const OpenSet1D& domain,
                                                 double tol = kDefaultTol);

} // namespace stefan1d
