#include "stefan1d/measure.hpp"

#include "stefan1d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stefan1d {

namespace {

// Value of the cell that contains the open cell (lo, hi) of a finer grid.
double density_on(const StepMeasure& mu, double lo, double hi) {
    return mu.density_at(0.5 * (lo + hi));
}

} // namespace

StepMeasure::StepMeasure(std::vector<double> breaks, std::vector<double> values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {
    canonicalize();
}

StepMeasure StepMeasure::make(std::span<const double> breaks, std::span<const double> values) {
    if (breaks.empty() && values.empty()) {
        return {};
    }
    if (values.size() + 1 != breaks.size()) {
        throw ValidationError("step measure needs |values| = |breaks| - 1, got " +
                                  std::to_string(values.size()) + " values and " +
                                  std::to_string(breaks.size()) + " breaks",
                              values.size());
    }
    for (std::size_t i = 0; i < breaks.size(); ++i) {
        if (!std::isfinite(breaks[i])) {
            throw ValidationError("break " + std::to_string(i) + " is not finite", i);
        }
        if (i > 0 && !(breaks[i] > breaks[i - 1])) {
            throw ValidationError("breaks must be strictly increasing (index " +
                                      std::to_string(i) + ")",
                                  i);
        }
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] < 0.0) {
            throw ValidationError("density at cell " + std::to_string(i) +
                                      " must be finite and >= 0",
                                  i);
        }
    }
    return StepMeasure({breaks.begin(), breaks.end()}, {values.begin(), values.end()});
}

StepMeasure StepMeasure::indicator(double a, double b, double density) {
    if (!(b > a)) {
        return {};
    }
    const double br[] = {a, b};
    const double v[] = {density};
    return make(br, v);
}

StepMeasure StepMeasure::union_of(std::span<const Interval> blocks, double density) {
    std::vector<double> grid;
    grid.reserve(2 * blocks.size());
    for (const auto& b : blocks) {
        if (b.hi > b.lo) {
            grid.push_back(b.lo);
            grid.push_back(b.hi);
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.size() < 2) {
        return {};
    }
    std::vector<double> values(grid.size() - 1, 0.0);
    for (const auto& b : blocks) {
        if (!(b.hi > b.lo)) {
            continue;
        }
        auto first = std::lower_bound(grid.begin(), grid.end(), b.lo) - grid.begin();
        auto last = std::lower_bound(grid.begin(), grid.end(), b.hi) - grid.begin();
        for (auto i = first; i < last; ++i) {
            values[static_cast<std::size_t>(i)] += density;
        }
    }
    return StepMeasure(std::move(grid), std::move(values));
}

void StepMeasure::canonicalize() {
    if (values_.empty()) {
        breaks_.clear();
        return;
    }
    std::vector<double> br{breaks_.front()};
    std::vector<double> val;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!val.empty() && val.back() == values_[i]) {
            br.back() = breaks_[i + 1];
        } else {
            val.push_back(values_[i]);
            br.push_back(breaks_[i + 1]);
        }
    }
    // Drop zero cells at both ends.
    std::size_t first = 0;
    while (first < val.size() && val[first] == 0.0) {
        ++first;
    }
    std::size_t last = val.size();
    while (last > first && val[last - 1] == 0.0) {
        --last;
    }
    if (first == last) {
        breaks_.clear();
        values_.clear();
        return;
    }
    breaks_.assign(br.begin() + static_cast<std::ptrdiff_t>(first),
                   br.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    values_.assign(val.begin() + static_cast<std::ptrdiff_t>(first),
                   val.begin() + static_cast<std::ptrdiff_t>(last));
}

double StepMeasure::mass() const {
    double k = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        k += values_[i] * (breaks_[i + 1] - breaks_[i]);
    }
    return k;
}

double StepMeasure::first_moment() const {
    double beta = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        // (b^2 - a^2)/2 factored to keep cancellation down.
        beta += values_[i] * (breaks_[i + 1] - breaks_[i]) * (breaks_[i + 1] + breaks_[i]) * 0.5;
    }
    return beta;
}

double StepMeasure::density_at(double y) const {
    if (values_.empty() || y < breaks_.front() || y >= breaks_.back()) {
        return 0.0;
    }
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), y);
    return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

double StepMeasure::sup_density() const {
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

double StepMeasure::cdf(double y) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (y >= breaks_[i + 1]) {
            acc += values_[i] * (breaks_[i + 1] - breaks_[i]);
        } else {
            if (y > breaks_[i]) {
                acc += values_[i] * (y - breaks_[i]);
            }
            break;
        }
    }
    return acc;
}

double StepMeasure::quantile(double u) const {
    const double k = mass();
    if (!(u >= 0.0) || u > k) {
        throw RangeError("quantile level " + std::to_string(u) + " outside [0, " +
                         std::to_string(k) + "]");
    }
    if (values_.empty()) {
        throw RangeError("quantile of an empty measure");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double cell = values_[i] * (breaks_[i + 1] - breaks_[i]);
        if (values_[i] > 0.0 && acc + cell >= u) {
            const double y = breaks_[i] + std::max(0.0, u - acc) / values_[i];
            return std::min(y, breaks_[i + 1]);
        }
        acc += cell;
    }
    return breaks_.back();
}

StepMeasure StepMeasure::restricted_to(double a, double b) const {
    if (values_.empty() || !(b > a) || b <= breaks_.front() || a >= breaks_.back()) {
        return {};
    }
    std::vector<double> br{std::max(a, breaks_.front())};
    std::vector<double> val;
    const double end = std::min(b, breaks_.back());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (breaks_[i + 1] <= br.front()) {
            continue;
        }
        if (breaks_[i] >= end) {
            break;
        }
        val.push_back(values_[i]);
        br.push_back(std::min(breaks_[i + 1], end));
    }
    return StepMeasure(std::move(br), std::move(val));
}

std::vector<Interval> StepMeasure::support_intervals() const {
    std::vector<Interval> out;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] <= 0.0) {
            continue;
        }
        if (!out.empty() && out.back().hi == breaks_[i]) {
            out.back().hi = breaks_[i + 1];
        } else {
            out.push_back({breaks_[i], breaks_[i + 1]});
        }
    }
    return out;
}

StepMeasure StepMeasure::operator+(const StepMeasure& other) const {
    auto grid = merged_grid(*this, other);
    if (grid.size() < 2) {
        return {};
    }
    std::vector<double> val(grid.size() - 1);
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        val[j] = density_on(*this, grid[j], grid[j + 1]) + density_on(other, grid[j], grid[j + 1]);
    }
    return StepMeasure(std::move(grid), std::move(val));
}

StepMeasure StepMeasure::operator*(double scale) const {
    if (!std::isfinite(scale) || scale < 0.0) {
        throw ValidationError("measure scale factor must be finite and >= 0");
    }
    auto val = values_;
    for (auto& v : val) {
        v *= scale;
    }
    return StepMeasure(breaks_, std::move(val));
}

std::vector<double> merged_grid(const StepMeasure& mu, const StepMeasure& nu) {
    std::vector<double> grid;
    grid.reserve(mu.breaks().size() + nu.breaks().size());
    std::merge(mu.breaks().begin(), mu.breaks().end(), nu.breaks().begin(), nu.breaks().end(),
               std::back_inserter(grid));
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

double positive_part_l1(const StepMeasure& mu, const StepMeasure& nu) {
    const auto grid = merged_grid(mu, nu);
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        const double diff = density_on(mu, grid[j], grid[j + 1]) - density_on(nu, grid[j], grid[j + 1]);
        if (diff > 0.0) {
            acc += diff * (grid[j + 1] - grid[j]);
        }
    }
    return acc;
}

double l1_distance(const StepMeasure& mu, const StepMeasure& nu) {
    return positive_part_l1(mu, nu) + positive_part_l1(nu, mu);
}

bool pointwise_leq(const StepMeasure& mu, const StepMeasure& nu, double tol) {
    const auto grid = merged_grid(mu, nu);
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        if (density_on(mu, grid[j], grid[j + 1]) > density_on(nu, grid[j], grid[j + 1]) + tol) {
            return false;
        }
    }
    return true;
}

OpenSet1D OpenSet1D::make(std::vector<Interval> components) {
    for (std::size_t i = 0; i < components.size(); ++i) {
        const auto& c = components[i];
        if (!std::isfinite(c.lo) || !std::isfinite(c.hi) || !(c.lo < c.hi)) {
            throw ValidationError("component " + std::to_string(i) + " is not a bounded open interval",
                                  i);
        }
        if (i > 0 && components[i - 1].hi > c.lo) {
            throw ValidationError("components must be disjoint and sorted (index " +
                                      std::to_string(i) + ")",
                                  i);
        }
    }
    return OpenSet1D(std::move(components));
}

OpenSet1D OpenSet1D::interval(double c, double d) {
    return make({{c, d}});
}

double OpenSet1D::total_length() const {
    double len = 0.0;
    for (const auto& c : components_) {
        len += c.length();
    }
    return len;
}

std::size_t OpenSet1D::component_of(double y) const {
    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (y > components_[i].lo && y < components_[i].hi) {
            return i;
        }
    }
    return components_.size();
}

double leaked_mass(const StepMeasure& mu, const OpenSet1D& domain) {
    double inside = 0.0;
    for (const auto& c : domain.components()) {
        inside += mu.restricted_to(c.lo, c.hi).mass();
    }
    return std::max(0.0, mu.mass() - inside);
}

std::vector<StepMeasure> restrict(const StepMeasure& mu, const OpenSet1D& domain, double tol) {
    std::vector<StepMeasure> parts;
    parts.reserve(domain.size());
    double inside = 0.0;
    for (const auto& c : domain.components()) {
        parts.push_back(mu.restricted_to(c.lo, c.hi));
        inside += parts.back().mass();
    }
    const double leak = std::max(0.0, mu.mass() - inside);
    if (leak > tol) {
        throw SupportError("measure has mass " + std::to_string(leak) + " outside the open set", leak);
    }
    return parts;
}

} // namespace stefan1d
