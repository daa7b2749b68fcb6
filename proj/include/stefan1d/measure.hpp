#pragma once

#include <span>
#include <vector>

namespace stefan1d {

inline constexpr double kDefaultTol = 1e-9;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool operator==(const Interval&) const = default;
};

/**
 * Nonnegative piecewise-constant density with bounded support.
 *
 * Cell i spans [breaks[i], breaks[i+1]) with density values[i]; the density is
 * zero outside [breaks.front(), breaks.back()]. The stored form is canonical:
 * adjacent cells with equal density are merged and zero cells at either end
 * are dropped, so two measures that agree a.e. compare equal.
 */
class StepMeasure {
public:
    StepMeasure() = default;

    /// Throws ValidationError naming the first offending index.
    static StepMeasure make(std::span<const double> breaks, std::span<const double> values);

    static StepMeasure indicator(double a, double b, double density = 1.0);

    /// Unit-density union of the given intervals. Zero-width entries are skipped;
    /// overlapping entries stack (density 2 on the overlap).
    static StepMeasure union_of(std::span<const Interval> blocks, double density = 1.0);

    const std::vector<double>& breaks() const { return breaks_; }
    const std::vector<double>& values() const { return values_; }
    bool empty() const { return values_.empty(); }
    std::size_t cells() const { return values_.size(); }

    double mass() const;
    double first_moment() const;

    double density_at(double y) const;
    double sup_density() const;

    /// Mass on (-inf, y].
    double cdf(double y) const;
    /// Generalized inverse of cdf: smallest y with cdf(y) >= u. Throws RangeError
    /// unless 0 <= u <= mass().
    double quantile(double u) const;

    /// mu * chi_(a,b).
    StepMeasure restricted_to(double a, double b) const;

    /// Maximal runs of positive density as intervals.
    std::vector<Interval> support_intervals() const;

    StepMeasure operator+(const StepMeasure& other) const;
    StepMeasure operator*(double scale) const;

    bool operator==(const StepMeasure&) const = default;

private:
    StepMeasure(std::vector<double> breaks, std::vector<double> values);
    void canonicalize();

    std::vector<double> breaks_;
    std::vector<double> values_;
};

inline double mass(const StepMeasure& mu) { return mu.mass(); }
inline double first_moment(const StepMeasure& mu) { return mu.first_moment(); }

/// Union of the break grids of both measures, sorted and deduplicated.
std::vector<double> merged_grid(const StepMeasure& mu, const StepMeasure& nu);

/// Integral of max(mu - nu, 0).
double positive_part_l1(const StepMeasure& mu, const StepMeasure& nu);

/// Integral of |mu - nu|.
double l1_distance(const StepMeasure& mu, const StepMeasure& nu);

/// True iff mu <= nu + tol almost everywhere.
bool pointwise_leq(const StepMeasure& mu, const StepMeasure& nu, double tol = kDefaultTol);

/// Finite disjoint union of bounded open intervals, sorted left to right.
class OpenSet1D {
public:
    OpenSet1D() = default;

    /// Requires c_n < d_n <= c_{n+1}; throws ValidationError otherwise.
    static OpenSet1D make(std::vector<Interval> components);
    static OpenSet1D interval(double c, double d);

    const std::vector<Interval>& components() const { return components_; }
    std::size_t size() const { return components_.size(); }
    double total_length() const;

    /// Index of the component containing y, or size() if none.
    std::size_t component_of(double y) const;

private:
    explicit OpenSet1D(std::vector<Interval> components) : components_(std::move(components)) {}

    std::vector<Interval> components_;
};

/// Splits mu into mu * chi_(c_n, d_n), one entry per component. Throws
/// SupportError when more than `tol` of mass lies outside O.
std::vector<StepMeasure> restrict(const StepMeasure& mu, const OpenSet1D& domain,
                                  double tol = kDefaultTol);

/// Mass of mu outside O.
double leaked_mass(const StepMeasure& mu, const OpenSet1D& domain);

} // namespace stefan1d
