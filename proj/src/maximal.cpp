#include "stefan1d/maximal.hpp"

#include "stefan1d/errors.hpp"
#include "stefan1d/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace stefan1d {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

} // namespace

StepMeasure BlockPair::measure() const {
    const Interval parts[] = {{c, e}, {f, d}};
    return StepMeasure::union_of(parts);
}

BlockPair solve_component(double c, double d, double k, double beta, double tol) {
    if (!std::isfinite(c) || !std::isfinite(d) || !(d > c)) {
        throw InfeasibleError("component (" + num(c) + ", " + num(d) + ") is not a bounded interval");
    }
    if (!std::isfinite(k) || !std::isfinite(beta)) {
        throw InfeasibleError("mass and first moment must be finite");
    }
    const double length = d - c;
    const double len_scale = std::max(1.0, length);
    if (k < -tol * len_scale) {
        throw InfeasibleError("mass " + num(k) + " violates k >= 0");
    }
    if (k > length + tol * len_scale) {
        throw InfeasibleError("mass " + num(k) + " violates k <= d - c = " + num(length));
    }
    k = std::clamp(k, 0.0, length);

    const double lower = k * c + 0.5 * k * k;
    const double upper = k * d - 0.5 * k * k;
    const double slack = tol * std::max({1.0, std::abs(lower), std::abs(upper)});
    if (beta < lower - slack) {
        throw InfeasibleError("first moment " + num(beta) + " violates beta >= k c + k^2/2 = " +
                              num(lower));
    }
    if (beta > upper + slack) {
        throw InfeasibleError("first moment " + num(beta) + " violates beta <= k d - k^2/2 = " +
                              num(upper));
    }

    if (k == 0.0) {
        return {c, c, d, d};
    }
    const double gap = length - k;
    if (gap <= 1e-12 * len_scale) {
        const double mid = 0.5 * (c + d);
        return {c, mid, mid, d};
    }
    // Mass p on the left block: beta = k d - k^2/2 - p (length - k).
    const double p = std::clamp((k * (d - 0.5 * k) - beta) / gap, 0.0, k);
    const double e = c + p;
    return {c, e, d - (k - p), d};
}

MaximalSolution solve(const StepMeasure& mu, const OpenSet1D& domain, double tol) {
    if (mu.sup_density() > 1.0 + tol) {
        throw AdmissibilityError("initial density " + num(mu.sup_density()) + " exceeds 1");
    }
    const auto parts = restrict(mu, domain, tol);

    MaximalSolution sol;
    std::vector<Interval> pieces;
    for (std::size_t n = 0; n < domain.size(); ++n) {
        const auto& comp = domain.components()[n];
        const ComponentData data{parts[n].mass(), parts[n].first_moment()};
        const auto bp = solve_component(comp.lo, comp.hi, data.mass, data.moment, tol);
        sol.blocks.push_back(bp);
        sol.provenance.push_back(data);
        pieces.push_back({bp.c, bp.e});
        pieces.push_back({bp.f, bp.d});
    }
    sol.measure = StepMeasure::union_of(pieces);
    sol.certificate = order_leq_sh_O(mu, sol.measure, domain, tol);
    if (!sol.certificate.ordered) {
        throw VerificationError("constructed target failed its subharmonic-order certificate: " +
                                    sol.certificate.violation,
                                to_json(sol.certificate).dump());
    }
    return sol;
}

SweepResult solve_by_sweep(std::span<const Interval> blocks, Interval domain, double tol) {
    if (!(domain.hi > domain.lo)) {
        throw ValidationError("sweep domain must be a bounded open interval");
    }
    std::vector<Interval> sorted(blocks.begin(), blocks.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (!(sorted[i].hi > sorted[i].lo)) {
            throw ValidationError("block " + std::to_string(i) + " is empty", i);
        }
        if (sorted[i].lo < domain.lo || sorted[i].hi > domain.hi) {
            throw ValidationError("block " + std::to_string(i) + " leaves the domain", i);
        }
    }
    std::sort(sorted.begin(), sorted.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    std::vector<Interval> runs;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (!runs.empty() && sorted[i].lo < runs.back().hi) {
            throw ValidationError("blocks overlap at index " + std::to_string(i), i);
        }
        if (!runs.empty() && sorted[i].lo == runs.back().hi) {
            runs.back().hi = sorted[i].hi;
        } else {
            runs.push_back(sorted[i]);
        }
    }

    const auto source = StepMeasure::union_of(runs);
    SweepResult out;
    out.states.push_back(source);

    const auto single = OpenSet1D::interval(domain.lo, domain.hi);
    MaximalSolution& sol = out.solution;
    sol.provenance.push_back({source.mass(), source.first_moment()});
    if (runs.empty()) {
        sol.blocks.push_back({domain.lo, domain.lo, domain.hi, domain.hi});
        sol.certificate = order_leq_sh_O(source, sol.measure, single, tol);
        return out;
    }

    auto block_moment = [](Interval b) { return 0.5 * (b.hi - b.lo) * (b.hi + b.lo); };

    double saturated = domain.lo; // (domain.lo, saturated) is already full
    Interval pending = runs.front();
    for (std::size_t i = 1; i < runs.size(); ++i) {
        const auto bp = solve_component(saturated, runs[i].lo, pending.length(), block_moment(pending), tol);
        saturated = bp.e;
        pending = {bp.f, runs[i].hi};

        std::vector<Interval> state{{domain.lo, saturated}, pending};
        state.insert(state.end(), runs.begin() + static_cast<std::ptrdiff_t>(i) + 1, runs.end());
        out.states.push_back(StepMeasure::union_of(state));
    }
    const auto last = solve_component(saturated, domain.hi, pending.length(), block_moment(pending), tol);
    const BlockPair result{domain.lo, last.e, last.f, domain.hi};
    sol.blocks.push_back(result);
    sol.measure = result.measure();
    out.states.push_back(sol.measure);
    sol.certificate = order_leq_sh_O(source, sol.measure, single, tol);
    if (!sol.certificate.ordered) {
        throw VerificationError("sweep result failed its certificate: " + sol.certificate.violation,
                                to_json(sol.certificate).dump());
    }
    return out;
}

SweepResult solve_by_sweep(const StepMeasure& mu, Interval domain, double tol) {
    for (std::size_t i = 0; i < mu.cells(); ++i) {
        const double v = mu.values()[i];
        if (v != 0.0 && v != 1.0) {
            throw ValidationError("sweep input must have density 0 or 1 (cell " + std::to_string(i) + ")", i);
        }
    }
    const auto runs = mu.support_intervals();
    return solve_by_sweep(std::span<const Interval>(runs), domain, tol);
}

CriticalPoint critical_point(double k, double beta, double tol) {
    if (!(k > 0.0 && k < 2.0)) {
        throw InfeasibleError("critical point needs 0 < k < 2, got k = " + num(k));
    }
    const double lower = 0.5 * k * k - k;
    const double upper = k - 0.5 * k * k;
    if (!(beta > lower && beta < upper)) {
        throw InfeasibleError("critical point needs k^2/2 - k < beta < k - k^2/2, got beta = " + num(beta));
    }

    CriticalPoint cp;
    cp.formula = 2.0 * beta * (1.0 - k) / (k * (2.0 - k));

    const double centre = beta / k;
    const auto mu = StepMeasure::indicator(centre - 0.5 * k, centre + 0.5 * k);
    const auto nu = solve_component(-1.0, 1.0, k, beta).measure();

    const auto slope_gap = potential_derivative(nu) - potential_derivative(mu);
    const auto roots = slope_gap.roots_in(-1.0, 1.0);
    cp.root_count = roots.size();
    cp.root = roots.empty() ? std::numeric_limits<double>::quiet_NaN() : roots.front();

    const auto gap = potential(nu) - potential(mu);
    const auto lowest = gap.min_on(-1.0, 1.0);
    cp.min_point = lowest.point;
    cp.min_value = lowest.value;
    cp.gap_at_left = gap(-1.0);
    cp.gap_at_right = gap(1.0);
    const double highest = gap.max_on(-1.0, 1.0).value;

    if (cp.root_count != 1) {
        throw VerificationError("expected one stationary point on (-1, 1), found " +
                                std::to_string(cp.root_count));
    }
    if (std::abs(cp.root - cp.formula) > tol) {
        throw VerificationError("stationary point " + num(cp.root) + " differs from closed form " +
                                num(cp.formula));
    }
    if (std::abs(cp.min_point - cp.formula) > std::max(tol, 1e-9)) {
        throw VerificationError("minimum of the potential gap is not at the stationary point");
    }
    if (std::abs(cp.gap_at_left) > tol || std::abs(cp.gap_at_right) > tol || highest > tol) {
        throw VerificationError("potential gap is not <= 0 on [-1, 1] with zeros at the ends");
    }
    return cp;
}

SampledCost::SampledCost(std::vector<double> grid, std::vector<double> values, double tol)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (grid_.size() < 2 || grid_.size() != values_.size()) {
        throw ValidationError("cost samples need at least two points and matching lengths");
    }
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (!std::isfinite(grid_[i]) || !std::isfinite(values_[i])) {
            throw ValidationError("cost sample " + std::to_string(i) + " is not finite", i);
        }
        if (i > 0 && !(grid_[i] > grid_[i - 1])) {
            throw ValidationError("cost grid must be strictly increasing (index " + std::to_string(i) + ")", i);
        }
    }
    for (std::size_t i = 1; i + 1 < grid_.size(); ++i) {
        const double left = (values_[i] - values_[i - 1]) / (grid_[i] - grid_[i - 1]);
        const double right = (values_[i + 1] - values_[i]) / (grid_[i + 1] - grid_[i]);
        if (right - left > tol * std::max(1.0, std::abs(left))) {
            throw ValidationError("cost samples are not concave at index " + std::to_string(i), i);
        }
    }
}

SampledCost SampledCost::from_function(const std::function<double(double)>& u, double lo, double hi,
                                       std::size_t points) {
    if (points < 2 || !(hi > lo)) {
        throw ValidationError("cost grid needs at least two points on a nonempty interval");
    }
    std::vector<double> grid(points);
    std::vector<double> values(points);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        values[i] = u(grid[i]);
    }
    return SampledCost(std::move(grid), std::move(values), 1e-9);
}

double SampledCost::max_second_difference() const {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < grid_.size(); ++i) {
        const double left = (values_[i] - values_[i - 1]) / (grid_[i] - grid_[i - 1]);
        const double right = (values_[i + 1] - values_[i]) / (grid_[i + 1] - grid_[i]);
        worst = std::max(worst, right - left);
    }
    return worst;
}

double primal_objective(const StepMeasure& nu, const SampledCost& u) {
    if (nu.empty()) {
        return 0.0;
    }
    const auto& g = u.grid();
    const auto& v = u.values();
    if (nu.breaks().front() < g.front() || nu.breaks().back() > g.back()) {
        throw ValidationError("measure support leaves the cost grid");
    }
    auto interp = [&](double x) {
        auto it = std::upper_bound(g.begin(), g.end(), x);
        std::size_t j = it == g.end() ? g.size() - 1 : static_cast<std::size_t>(it - g.begin());
        j = std::max<std::size_t>(j, 1);
        const double t = (x - g[j - 1]) / (g[j] - g[j - 1]);
        return v[j - 1] + t * (v[j] - v[j - 1]);
    };

    std::vector<double> pts;
    const double lo = nu.breaks().front();
    const double hi = nu.breaks().back();
    for (double x : nu.breaks()) {
        pts.push_back(x);
    }
    for (double x : g) {
        if (x > lo && x < hi) {
            pts.push_back(x);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    double total = 0.0;
    double u_left = interp(pts.front());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double u_right = interp(pts[i + 1]);
        const double density = nu.density_at(0.5 * (pts[i] + pts[i + 1]));
        total += density * 0.5 * (u_left + u_right) * (pts[i + 1] - pts[i]);
        u_left = u_right;
    }
    return total;
}

OrderCertificate check_admissible(const StepMeasure& nu, const StepMeasure& mu,
                                  const OpenSet1D& domain, double tol) {
    OrderCertificate cert;
    const double leak = leaked_mass(nu, domain);
    if (leak > tol) {
        cert.violation = "target has mass " + num(leak) + " outside O";
        cert.worst_gap = std::numeric_limits<double>::infinity();
        return cert;
    }
    if (nu.sup_density() > 1.0 + tol) {
        cert.violation = "target density " + num(nu.sup_density()) + " exceeds 1";
        cert.worst_gap = std::numeric_limits<double>::infinity();
        return cert;
    }
    try {
        return order_leq_sh_O(mu, nu, domain, tol);
    } catch (const SupportError& e) {
        cert.violation = e.what();
        cert.worst_gap = std::numeric_limits<double>::infinity();
        return cert;
    }
}

IndependenceReport independence_check(const StepMeasure& mu, const OpenSet1D& domain,
                                      std::span<const StepMeasure> candidates,
                                      std::span<const SampledCost> costs, double tol) {
    const auto best = solve(mu, domain, tol);
    IndependenceReport rep;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        auto cert = check_admissible(candidates[i], mu, domain, tol);
        if (cert.ordered) {
            rep.admitted.push_back(i);
        } else {
            rep.rejected.push_back(i);
            rep.rejected_certificates.push_back(std::move(cert));
        }
    }
    rep.maximal_is_argmin = true;
    for (const auto& u : costs) {
        const double star = primal_objective(best.measure, u);
        rep.maximal_objective.push_back(star);
        std::vector<double> row;
        std::size_t arg = 0;
        for (std::size_t idx : rep.admitted) {
            row.push_back(primal_objective(candidates[idx], u));
            if (row.back() < row[arg]) {
                arg = row.size() - 1;
            }
        }
        if (!row.empty() && star > row[arg] + tol * std::max(1.0, std::abs(row[arg]))) {
            rep.maximal_is_argmin = false;
        }
        rep.argmin.push_back(arg);
        rep.objectives.push_back(std::move(row));
    }
    return rep;
}

bool check_c0_sufficient(const StepMeasure& mu, const OpenSet1D& domain, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw ValidationError("delta must lie in (0, 1)");
    }
    return leaked_mass(mu, domain) <= kDefaultTol && mu.sup_density() <= delta;
}

} // namespace stefan1d
