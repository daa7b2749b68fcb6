#include "stefan1d/json_io.hpp"

#include "stefan1d/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace stefan1d {

double round_sig(double x, int digits) {
    if (!std::isfinite(x) || x == 0.0) {
        return x;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return std::strtod(buf, nullptr);
}

Json number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    return round_sig(x);
}

namespace {

Json numbers(const std::vector<double>& xs) {
    Json arr = Json::array();
    for (double x : xs) {
        arr.push_back(number(x));
    }
    return arr;
}

std::vector<double> read_numbers(const Json& j, const char* field) {
    if (!j.contains(field) || !j.at(field).is_array()) {
        throw ValidationError(std::string("expected array field \"") + field + "\"");
    }
    std::vector<double> out;
    for (const auto& v : j.at(field)) {
        if (!v.is_number()) {
            throw ValidationError(std::string("field \"") + field + "\" must hold numbers", out.size());
        }
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

Json to_json(const StepMeasure& mu) {
    return {{"breaks", numbers(mu.breaks())}, {"values", numbers(mu.values())}};
}

Json to_json(const OpenSet1D& domain) {
    Json comps = Json::array();
    for (const auto& c : domain.components()) {
        comps.push_back({number(c.lo), number(c.hi)});
    }
    return {{"components", comps}};
}

Json to_json(const OrderCertificate& cert) {
    Json j{{"ordered", cert.ordered},
           {"mass_gap", number(cert.mass_gap)},
           {"moment_gap", number(cert.moment_gap)},
           {"worst_point", number(cert.worst_point)},
           {"worst_gap", number(cert.worst_gap)}};
    Json per = Json::array();
    for (const auto& c : cert.per_component) {
        per.push_back({{"component", {number(c.component.lo), number(c.component.hi)}},
                       {"ordered", c.ordered},
                       {"mass_gap", number(c.mass_gap)},
                       {"moment_gap", number(c.moment_gap)},
                       {"worst_point", number(c.worst_point)},
                       {"worst_gap", number(c.worst_gap)}});
    }
    j["per_component"] = per;
    j["assumptions"] = cert.assumptions;
    if (!cert.violation.empty()) {
        j["violation"] = cert.violation;
    }
    return j;
}

Json to_json(const BlockPair& bp) {
    return {number(bp.c), number(bp.e), number(bp.f), number(bp.d)};
}

Json to_json(const MaximalSolution& sol) {
    Json blocks = Json::array();
    Json ks = Json::array();
    Json betas = Json::array();
    for (std::size_t n = 0; n < sol.blocks.size(); ++n) {
        blocks.push_back(to_json(sol.blocks[n]));
        ks.push_back(number(sol.provenance[n].mass));
        betas.push_back(number(sol.provenance[n].moment));
    }
    return {{"blocks", blocks},
            {"k_n", ks},
            {"beta_n", betas},
            {"measure", to_json(sol.measure)},
            {"certificate", to_json(sol.certificate)}};
}

Json to_json(const PiecewiseQuadratic& u) {
    Json pieces = Json::array();
    for (const auto& p : u.pieces) {
        pieces.push_back({number(p.a), number(p.b), number(p.c)});
    }
    return {{"breakpoints", numbers(u.breakpoints)}, {"pieces", pieces}};
}

Json to_json(const SimConfig& cfg) {
    return {{"n_particles", cfg.n_particles},
            {"dt", number(cfg.dt)},
            {"seed", cfg.seed},
            {"t_max", number(cfg.t_max)},
            {"parallel_components", cfg.parallel_components},
            {"bridge_correction", cfg.bridge_correction},
            {"histogram_bins", cfg.histogram_bins}};
}

Json to_json(const RunReport& report) {
    Json comps = Json::array();
    for (const auto& c : report.components) {
        comps.push_back({{"component", {number(c.component.lo), number(c.component.hi)}},
                         {"k", number(c.target.mass)},
                         {"beta", number(c.target.moment)},
                         {"particles", c.particles},
                         {"particle_mass", number(c.particle_mass)},
                         {"effective_dt", number(c.effective_dt)},
                         {"left_front", number(c.fronts.left)},
                         {"right_front", number(c.fronts.right)},
                         {"left_count", c.fronts.left_count},
                         {"right_count", c.fronts.right_count},
                         {"p_hat", number(c.p_hat)},
                         {"q_hat", number(c.q_hat)},
                         {"unfrozen", c.unfrozen},
                         {"steps", c.steps},
                         {"mean_freeze_time", number(c.mean_freeze_time)},
                         {"mean_freeze_position", number(c.mean_freeze_position)},
                         {"freeze_position_std", number(c.freeze_position_std)},
                         {"histogram", to_json(c.histogram)}});
    }
    return {{"components", comps},
            {"frozen", to_json(report.frozen)},
            {"unfrozen", report.unfrozen()},
            {"complete", report.complete()}};
}

Json to_json(const StabilityReport& rep) {
    return {{"input_l1_gap", number(rep.input_l1_gap)},
            {"output_l1_gap", number(rep.output_l1_gap)},
            {"ratio", number(rep.ratio)},
            {"monotone_in", rep.monotone_in},
            {"monotone_out", rep.monotone_out},
            {"closed_form_ratio", number(rep.closed_form_ratio)},
            {"closed_form_output_gap", number(rep.closed_form_output_gap)},
            {"first", to_json(rep.first)},
            {"second", to_json(rep.second)}};
}

StepMeasure measure_from_json(const Json& j) {
    if (!j.is_object()) {
        throw ValidationError("measure must be an object with \"breaks\" and \"values\"");
    }
    const auto breaks = read_numbers(j, "breaks");
    const auto values = read_numbers(j, "values");
    return StepMeasure::make(breaks, values);
}

OpenSet1D open_set_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("components") || !j.at("components").is_array()) {
        throw ValidationError("open set must be an object with a \"components\" array");
    }
    std::vector<Interval> comps;
    for (const auto& c : j.at("components")) {
        if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
            throw ValidationError("each component must be a pair [c, d]", comps.size());
        }
        comps.push_back({c[0].get<double>(), c[1].get<double>()});
    }
    return OpenSet1D::make(std::move(comps));
}

SimConfig sim_config_from_json(const Json& j) {
    SimConfig cfg;
    if (j.is_null()) {
        return cfg;
    }
    if (!j.is_object()) {
        throw ValidationError("simulation config must be an object");
    }
    try {
        cfg.n_particles = j.value("n_particles", cfg.n_particles);
        cfg.dt = j.value("dt", cfg.dt);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.t_max = j.value("t_max", cfg.t_max);
        cfg.parallel_components = j.value("parallel_components", cfg.parallel_components);
        cfg.bridge_correction = j.value("bridge_correction", cfg.bridge_correction);
        cfg.histogram_bins = j.value("histogram_bins", cfg.histogram_bins);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("simulation config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

LipschitzFamilyParams lipschitz_params_from_json(const Json& j) {
    if (!j.is_object()) {
        throw ValidationError("Lipschitz parameters must be an object with x, y, r, c");
    }
    LipschitzFamilyParams p;
    for (const char* key : {"x", "y", "r", "c"}) {
        if (!j.contains(key) || !j.at(key).is_number()) {
            throw ValidationError(std::string("Lipschitz parameters need numeric \"") + key + "\"");
        }
    }
    p.x = j.at("x").get<double>();
    p.y = j.at("y").get<double>();
    p.r = j.at("r").get<double>();
    p.c = j.at("c").get<double>();
    return p;
}

} // namespace stefan1d
