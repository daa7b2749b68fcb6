#pragma once

#include "stefan1d/measure.hpp"
#include "stefan1d/potential.hpp"

#include <functional>
#include <span>
#include <vector>

namespace stefan1d {

/// Saturated blocks (c, e) and (f, d) inside one component (c, d).
struct BlockPair {
    double c = 0.0;
    double e = 0.0;
    double f = 0.0;
    double d = 0.0;

    double left_width() const { return e - c; }
    double right_width() const { return d - f; }
    StepMeasure measure() const;
};

/// Mass k and first moment beta of one component's share of mu.
struct ComponentData {
    double mass = 0.0;
    double moment = 0.0;
};

struct MaximalSolution {
    std::vector<BlockPair> blocks;       // aligned with the open set's components
    std::vector<ComponentData> provenance;
    StepMeasure measure;                 // indicator of the union of all blocks
    OrderCertificate certificate;
};

/// Blocks of unit density at both ends of (c, d) carrying mass k and moment
/// beta. Throws InfeasibleError if k is outside [0, d - c] or beta outside
/// [k c + k^2/2, k d - k^2/2] (slack `tol` relative to max(1, |window|)).
BlockPair solve_component(double c, double d, double k, double beta, double tol = kDefaultTol);

/// Maximal target for mu on O, certified by order_leq_sh_O before return.
/// Throws AdmissibilityError for density above 1 + tol, SupportError for mass
/// outside O, VerificationError if the certificate fails.
MaximalSolution solve(const StepMeasure& mu, const OpenSet1D& domain, double tol = kDefaultTol);

/// Left-to-right merge of unit blocks strictly inside `domain`: the leftmost
/// pending block is solved inside (left saturated edge, next block start), its
/// right block fuses with the next input block, and so on.
struct SweepResult {
    MaximalSolution solution;
    /// Measure after each merge step; front() is the input, back() the result.
    std::vector<StepMeasure> states;
};

SweepResult solve_by_sweep(std::span<const Interval> blocks, Interval domain, double tol = kDefaultTol);
/// Same, with blocks read off a measure whose density is 0 or 1 everywhere.
SweepResult solve_by_sweep(const StepMeasure& mu, Interval domain, double tol = kDefaultTol);

struct CriticalPoint {
    double formula = 0.0;      // 2 beta (1 - k) / (k (2 - k))
    double root = 0.0;         // zero of (U^nu*)' - (U^mu)' from the exact root finder
    std::size_t root_count = 0;
    double min_point = 0.0;    // argmin of U^nu* - U^mu on [-1, 1]
    double min_value = 0.0;
    double gap_at_left = 0.0;  // (U^nu* - U^mu)(-1)
    double gap_at_right = 0.0; // (U^nu* - U^mu)(1)
};

/// Stationary point of U^nu* - U^mu on (-1, 1) for mu the unit block with mass
/// k and moment beta. Throws InfeasibleError outside 0 < k < 2,
/// k^2/2 - k < beta < k - k^2/2, and VerificationError when the root finder
/// disagrees with the closed form beyond `tol` or finds more than one root.
CriticalPoint critical_point(double k, double beta, double tol = 1e-10);

/// Cost function sampled on a grid; integrals use the linear interpolant.
class SampledCost {
public:
    /// Throws ValidationError if grid is not strictly increasing or a divided
    /// second difference exceeds `tol` (i.e. the samples are not concave).
    SampledCost(std::vector<double> grid, std::vector<double> values, double tol = 1e-12);

    static SampledCost from_function(const std::function<double(double)>& u, double lo, double hi,
                                     std::size_t points);

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }

    /// Largest divided second difference; negative means strictly concave.
    double max_second_difference() const;

private:
    std::vector<double> grid_;
    std::vector<double> values_;
};

/// Integral of u against nu. Throws ValidationError if supp nu leaves the grid.
double primal_objective(const StepMeasure& nu, const SampledCost& u);

struct IndependenceReport {
    /// objectives[j][i]: cost j, admitted candidate i.
    std::vector<std::vector<double>> objectives;
    std::vector<double> maximal_objective;   // per cost
    std::vector<std::size_t> argmin;         // per cost, index into admitted
    std::vector<std::size_t> admitted;       // indices into the input candidates
    std::vector<std::size_t> rejected;
    std::vector<OrderCertificate> rejected_certificates;
    /// True iff for every cost the maximal target is no worse than any
    /// admitted candidate (within tol).
    bool maximal_is_argmin = false;
};

IndependenceReport independence_check(const StepMeasure& mu, const OpenSet1D& domain,
                                      std::span<const StepMeasure> candidates,
                                      std::span<const SampledCost> costs, double tol = kDefaultTol);

/// nu in A_{mu,O}: density <= 1 on O, supp nu within O, mu <=_SH,O nu.
OrderCertificate check_admissible(const StepMeasure& nu, const StepMeasure& mu,
                                  const OpenSet1D& domain, double tol = kDefaultTol);

/// Sufficient form of (C0): mu itself sits below delta. Throws ValidationError
/// unless 0 < delta < 1.
bool check_c0_sufficient(const StepMeasure& mu, const OpenSet1D& domain, double delta);

} // namespace stefan1d
