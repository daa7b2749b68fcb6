#include "stefan1d/stability.hpp"

#include "stefan1d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace stefan1d {

void LipschitzFamilyParams::validate() const {
    auto fail = [](const std::string& what) { throw ParameterError("Lipschitz family: " + what); };
    if (!(x > 0.0 && x < 1.0)) {
        fail("need 0 < x < 1");
    }
    if (!(y > 0.0 && y < 2.0 * x)) {
        fail("need 0 < y < 2x");
    }
    if (!(r > 0.0 && r < 1.0)) {
        fail("need 0 < r < 1");
    }
    if (!(c > 0.0 && c < 1.0)) {
        fail("need 0 < c < 1");
    }
    if (!(-c + r * y < -x)) {
        fail("need -c + r y < -x so the extra block stays left of (-x, x)");
    }
}

StepMeasure LipschitzFamilyParams::first() const {
    return StepMeasure::indicator(-x, x, r);
}

StepMeasure LipschitzFamilyParams::second() const {
    return StepMeasure::indicator(-c, -c + r * y) + StepMeasure::indicator(-x, x - y, r);
}

double LipschitzFamilyParams::closed_form_output_gap() const {
    return (2.0 * r * x * y + 2.0 * c * r * y - r * y * y - r * r * y * y) / (2.0 * (2.0 - 2.0 * r * x));
}

double LipschitzFamilyParams::closed_form_ratio() const {
    return (2.0 * x + 2.0 * c - y - r * y) / (4.0 * (1.0 - r * x));
}

double LipschitzFamilyParams::limiting_ratio() const {
    return (x + c) / (2.0 * (1.0 - r * x));
}

bool LipschitzFamilyParams::in_closed_form_regime() const {
    return closed_form_output_gap() <= 2.0 - 2.0 * r * x;
}

StabilityReport monotonicity_report(const StepMeasure& mu1, const StepMeasure& mu2, const OpenSet1D& domain,
                                    double tol) {
    StabilityReport rep;
    rep.first = solve(mu1, domain, tol);
    rep.second = solve(mu2, domain, tol);
    rep.monotone_in = pointwise_leq(mu1, mu2, tol);
    rep.monotone_out = pointwise_leq(rep.first.measure, rep.second.measure, tol);
    rep.input_l1_gap = positive_part_l1(mu1, mu2);
    rep.output_l1_gap = positive_part_l1(rep.first.measure, rep.second.measure);
    rep.ratio = rep.input_l1_gap > 0.0 ? rep.output_l1_gap / rep.input_l1_gap : 0.0;
    rep.closed_form_ratio = std::numeric_limits<double>::quiet_NaN();
    rep.closed_form_output_gap = std::numeric_limits<double>::quiet_NaN();
    return rep;
}

StabilityReport lipschitz_ratio(const LipschitzFamilyParams& params, double tol) {
    params.validate();
    const auto domain = OpenSet1D::interval(-1.0, 1.0);
    auto rep = monotonicity_report(params.first(), params.second(), domain, tol);
    rep.closed_form_ratio = params.closed_form_ratio();
    rep.closed_form_output_gap = params.closed_form_output_gap();
    return rep;
}

WeakConvergenceTable weak_convergence_experiment(std::span<const StepMeasure> sequence,
                                                 const StepMeasure& limit, const OpenSet1D& domain,
                                                 double tol) {
    const auto target = solve(limit, domain, tol);
    std::vector<MaximalSolution> solved;
    solved.reserve(sequence.size());
    for (const auto& mu : sequence) {
        solved.push_back(solve(mu, domain, tol));
    }

    // p_n(k, beta) = (k d - k^2/2 - beta) / (L - k) has |dp/dk| <= (|d - k| + k) / (L - k)
    // and |dp/dbeta| = 1 / (L - k); the L1 gap of two block pairs is at most 2|dp| + |dk|.
    WeakConvergenceTable table;
    for (std::size_t n = 0; n < domain.size(); ++n) {
        const auto& comp = domain.components()[n];
        const double length = comp.length();
        double k_lo = target.provenance[n].mass;
        double k_hi = k_lo;
        for (const auto& s : solved) {
            k_lo = std::min(k_lo, s.provenance[n].mass);
            k_hi = std::max(k_hi, s.provenance[n].mass);
        }
        const double room = length - k_hi;
        if (!(room > 0.0)) {
            table.constant = std::numeric_limits<double>::infinity();
            break;
        }
        const double dk = (std::max(std::abs(comp.hi - k_lo), std::abs(comp.hi - k_hi)) + k_hi) / room;
        table.constant = std::max({table.constant, 2.0 * dk + 1.0, 2.0 / room});
    }

    table.bounded = true;
    for (std::size_t l = 0; l < solved.size(); ++l) {
        WeakConvergenceRow row;
        row.index = l;
        for (std::size_t n = 0; n < domain.size(); ++n) {
            row.mass_gap += std::abs(solved[l].provenance[n].mass - target.provenance[n].mass);
            row.moment_gap += std::abs(solved[l].provenance[n].moment - target.provenance[n].moment);
        }
        row.l1_gap = l1_distance(solved[l].measure, target.measure);
        const double drift = row.mass_gap + row.moment_gap;
        row.bound = drift > 0.0 ? table.constant * drift : 0.0;
        if (row.l1_gap > row.bound + tol) {
            table.bounded = false;
        }
        table.rows.push_back(row);
    }
    return table;
}

} // namespace stefan1d
