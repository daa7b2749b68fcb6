#include "stefan1d/repro.hpp"

#include "stefan1d/errors.hpp"
#include "stefan1d/maximal.hpp"
#include "stefan1d/particles.hpp"
#include "stefan1d/stability.hpp"

#include <fmt/format.h>

#include <cmath>
#include <functional>
#include <limits>

namespace stefan1d {

namespace {

class ScenarioBuilder {
public:
    ScenarioBuilder(std::string name, Json inputs, std::optional<double> override_tol)
        : override_(override_tol) {
        scenario_.name = std::move(name);
        scenario_.inputs = std::move(inputs);
    }

    double tol(double nominal) const { return override_.value_or(nominal); }

    void equal(std::string quantity, std::string source, double expected, double computed, double nominal,
               std::string note = {}) {
        ReproRow row{std::move(quantity), std::move(source), "=", expected, computed, tol(nominal), false,
                     std::move(note)};
        row.computed += 0.0; // no negative zero in the table
        row.pass = std::isfinite(computed) && std::abs(computed - expected) <= row.tolerance;
        scenario_.rows.push_back(std::move(row));
    }

    void greater(std::string quantity, std::string source, double bound, double computed, std::string note = {}) {
        ReproRow row{std::move(quantity), std::move(source), ">", bound, computed, 0.0, computed > bound,
                     std::move(note)};
        scenario_.rows.push_back(std::move(row));
    }

    void flag(std::string quantity, std::string source, bool expected, bool computed) {
        equal(std::move(quantity), std::move(source), expected ? 1.0 : 0.0, computed ? 1.0 : 0.0, 0.0);
        scenario_.rows.back().tolerance = 0.0;
        scenario_.rows.back().pass = expected == computed;
    }

    void failure(std::string quantity, const std::string& what) {
        ReproRow row{std::move(quantity), "derived", "=", 0.0, std::numeric_limits<double>::quiet_NaN(), 0.0,
                     false, what};
        scenario_.rows.push_back(std::move(row));
    }

    ReproScenario finish() {
        scenario_.pass = !scenario_.rows.empty();
        for (const auto& r : scenario_.rows) {
            scenario_.pass = scenario_.pass && r.pass;
        }
        return std::move(scenario_);
    }

private:
    ReproScenario scenario_;
    std::optional<double> override_;
};

ReproScenario example_5_1(std::optional<double> tol) {
    const auto domain = OpenSet1D::interval(-1.0, 1.0);
    const auto mu1 = StepMeasure::indicator(-0.9, 0.0);
    const auto mu2 = StepMeasure::indicator(-1.0, 0.0);
    ScenarioBuilder b("example_5_1", {{"mu1", to_json(mu1)}, {"mu2", to_json(mu2)}, {"open_set", to_json(domain)}},
                      tol);
    const auto rep = monotonicity_report(mu1, mu2, domain);
    b.equal("L1(nu2, mu2)", "reported", 0.0, l1_distance(rep.second.measure, mu2), 1e-12,
            "saturated input is a fixed point");
    b.greater("nu1 mass on (0,1)", "reported", 0.0, rep.first.measure.restricted_to(0.0, 1.0).mass());
    b.flag("mu1 <= mu2", "reported", true, rep.monotone_in);
    b.flag("nu1 <= nu2", "reported", false, rep.monotone_out);
    return b.finish();
}

ReproScenario example_5_2(std::optional<double> tol) {
    const auto domain = OpenSet1D::interval(-1.0, 1.0);
    const auto mu1 = StepMeasure::indicator(0.0, std::sqrt(0.75), 0.99);
    const auto mu2 = StepMeasure::indicator(-0.5, 1.0, 0.99);
    ScenarioBuilder b("example_5_2", {{"mu1", to_json(mu1)}, {"mu2", to_json(mu2)}, {"open_set", to_json(domain)}},
                      tol);
    const auto rep = monotonicity_report(mu1, mu2, domain);
    b.equal("beta1", "reported", 0.37125, mu1.first_moment(), 1e-12);
    b.equal("beta2", "reported", 0.37125, mu2.first_moment(), 1e-12);
    b.equal("A1 left end e1", "reported", -0.896224371, rep.first.blocks[0].e, 1e-6);
    b.equal("A1 right start f1", "reported", 0.246410478, rep.first.blocks[0].f, 1e-6);
    b.equal("A2 left end e2", "reported", -0.978373786, rep.second.blocks[0].e, 1e-6);
    b.equal("A2 right start f2", "reported", -0.463373786, rep.second.blocks[0].f, 1e-6);
    b.flag("mu1 <= mu2", "reported", true, rep.monotone_in);
    b.flag("nu1 <= nu2", "reported", false, rep.monotone_out);
    return b.finish();
}

ReproScenario lipschitz_family(std::optional<double> tol) {
    const LipschitzFamilyParams p{0.9, 0.01, 0.9, 0.99};
    const LipschitzFamilyParams edge{0.999, 1e-4, 0.999, 0.999};
    ScenarioBuilder b("lipschitz_family",
                      {{"params", {{"x", p.x}, {"y", p.y}, {"r", p.r}, {"c", p.c}}},
                       {"edge_params", {{"x", edge.x}, {"y", edge.y}, {"r", edge.r}, {"c", edge.c}}},
                       {"near_params", {{"x", 0.999}, {"y", 1e-6}, {"r", 0.999}, {"c", 0.99995}}}},
                      tol);
    const auto rep = lipschitz_ratio(p);
    b.equal("||(mu1-mu2)+|| = r y", "reported", p.r * p.y, rep.input_l1_gap, 1e-9);
    b.equal("||(nu1-nu2)+||", "reported", p.closed_form_output_gap(), rep.output_l1_gap, 1e-9);
    b.equal("ratio", "derived", 3.761 / 0.76, rep.ratio, 1e-9);
    b.equal("y -> 0 limit", "reported", (p.x + p.c) / (2.0 * (1.0 - p.r * p.x)), p.limiting_ratio(), 1e-12);
    b.greater("closed-form ratio at the edge point", "derived", 100.0, edge.closed_form_ratio(),
              "closed form only: the edge point has -c + r y >= -x");
    const LipschitzFamilyParams near{0.999, 1e-6, 0.999, 0.99995};
    b.greater("solved ratio at (0.999, 1e-6, 0.999, 0.99995)", "derived", 100.0, lipschitz_ratio(near).ratio);
    return b.finish();
}

ReproScenario appendix_critical_point(std::optional<double> tol) {
    ScenarioBuilder b("appendix_critical_point", {{"cases", {{0.8, 0.2}, {0.5, 0.0}, {1.3, -0.2}}}}, tol);
    const double root_tol = b.tol(1e-10);
    auto check = [&](double k, double beta, double expected, const char* source) {
        const auto label = fmt::format("s0(k={}, beta={})", k, beta);
        try {
            const auto cp = critical_point(k, beta, root_tol);
            b.equal(label, source, expected, cp.root, 1e-10);
            b.equal(label + " root count", "reported", 1.0, static_cast<double>(cp.root_count), 0.0);
        } catch (const Error& e) {
            b.failure(label, e.what());
        }
    };
    check(0.8, 0.2, 1.0 / 12.0, "derived");
    check(0.5, 0.0, 0.0, "trivial");
    check(1.3, -0.2, 2.0 * -0.2 * (1.0 - 1.3) / (1.3 * 0.7), "reported");
    return b.finish();
}

ReproScenario weak_convergence(std::optional<double> tol) {
    const auto domain = OpenSet1D::interval(-1.0, 1.0);
    const auto limit = StepMeasure::indicator(-0.5, 0.5);
    std::vector<StepMeasure> seq;
    for (int l = 2; l <= 64; ++l) {
        seq.push_back(limit * (1.0 - 1.0 / l));
    }
    ScenarioBuilder b("weak_convergence",
                      {{"family", "(1 - 1/l) chi_(-0.5, 0.5), l = 2..64"}, {"open_set", to_json(domain)}}, tol);
    const auto table = weak_convergence_experiment(seq, limit, domain);
    bool decreasing = true;
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        decreasing = decreasing && table.rows[i].l1_gap < table.rows[i - 1].l1_gap;
    }
    b.equal("L1(nu_64, nu) = 1/64", "derived", 1.0 / 64.0, table.rows.back().l1_gap, 1e-12);
    b.flag("L1 gap bounded by endpoint-map constant", "derived", true, table.bounded);
    b.flag("L1 gap strictly decreasing", "derived", true, decreasing);
    return b.finish();
}

ReproScenario particle_example_5_2(std::optional<double> tol) {
    const auto domain = OpenSet1D::interval(-1.0, 1.0);
    const auto mu1 = StepMeasure::indicator(0.0, std::sqrt(0.75), 0.99);
    SimConfig cfg;
    cfg.n_particles = 20000;
    cfg.dt = 1e-4;
    cfg.seed = 2024;
    ScenarioBuilder b("particle_example_5_2", {{"mu", to_json(mu1)}, {"config", to_json(cfg)}}, tol);
    const auto report = run(mu1, domain, cfg);
    const auto& c = report.components.front();
    b.equal("unfrozen walkers", "trivial", 0.0, static_cast<double>(report.unfrozen()), 0.0);
    b.equal("p_hat + q_hat = k", "trivial", c.target.mass, c.p_hat + c.q_hat, 1e-12);
    b.equal("p_hat", "reported", 1.0 - 0.896224371, c.p_hat, 0.01, "statistical, n = 20000");
    return b.finish();
}

} // namespace

ReproManifest build_repro_manifest(std::optional<double> tolerance_override) {
    using Builder = std::function<ReproScenario(std::optional<double>)>;
    const std::pair<const char*, Builder> scenarios[] = {
        {"example_5_1", example_5_1},
        {"example_5_2", example_5_2},
        {"lipschitz_family", lipschitz_family},
        {"appendix_critical_point", appendix_critical_point},
        {"weak_convergence", weak_convergence},
        {"particle_example_5_2", particle_example_5_2},
    };
    ReproManifest m;
    m.pass = true;
    for (const auto& [name, build] : scenarios) {
        ReproScenario s;
        try {
            s = build(tolerance_override);
        } catch (const Error& e) {
            s.name = name;
            s.rows.push_back({"scenario", "derived", "=", 0.0, std::numeric_limits<double>::quiet_NaN(), 0.0, false,
                              e.what()});
            s.pass = false;
        }
        m.pass = m.pass && s.pass;
        m.scenarios.push_back(std::move(s));
    }
    return m;
}

Json to_json(const ReproManifest& manifest) {
    Json scenarios = Json::array();
    for (const auto& s : manifest.scenarios) {
        Json rows = Json::array();
        for (const auto& r : s.rows) {
            Json row{{"quantity", r.quantity},     {"source", r.source},
                     {"relation", r.relation},     {"expected", number(r.expected)},
                     {"computed", number(r.computed)}, {"tolerance", number(r.tolerance)},
                     {"pass", r.pass}};
            if (!r.note.empty()) {
                row["note"] = r.note;
            }
            rows.push_back(std::move(row));
        }
        scenarios.push_back({{"name", s.name}, {"inputs", s.inputs}, {"rows", rows}, {"pass", s.pass}});
    }
    return {{"scenarios", scenarios}, {"pass", manifest.pass}};
}

std::string format_table(const ReproManifest& manifest) {
    std::string out = fmt::format("{:<26} {:<44} {:<9} {:>20} {:>20} {:>9}  {}\n", "scenario", "quantity", "source",
                                  "expected", "computed", "tol", "status");
    for (const auto& s : manifest.scenarios) {
        for (const auto& r : s.rows) {
            out += fmt::format("{:<26} {:<44} {:<9} {:>1}{:>19.12g} {:>20.12g} {:>9.2g}  {}\n", s.name, r.quantity,
                               r.source, r.relation == "=" ? "" : r.relation, r.expected, r.computed, r.tolerance,
                               r.pass ? "PASS" : "FAIL");
            if (!r.pass && !r.note.empty()) {
                out += fmt::format("{:<26}   note: {}\n", "", r.note);
            }
        }
    }
    out += fmt::format("overall: {}\n", manifest.pass ? "PASS" : "FAIL");
    return out;
}

} // namespace stefan1d
