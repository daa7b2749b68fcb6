#include "stefan1d/cli.hpp"

#include "stefan1d/errors.hpp"
#include "stefan1d/json_io.hpp"
#include "stefan1d/repro.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace stefan1d::cli {

namespace {

struct Options {
    std::string input;
    std::string out;
    std::string csv;
    std::string hist;
    std::string family = "lipschitz";
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    bool json = false;
};

Json read_input(const std::string& path) {
    if (path.empty()) {
        throw ValidationError("--input FILE is required");
    }
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open input file " + path);
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw ValidationError(std::string("input is missing \"") + key + "\"");
    }
    return j.at(key);
}

double input_tol(const Json& j, const Options& opt) {
    if (opt.tol) {
        return *opt.tol;
    }
    if (j.is_object() && j.contains("tol")) {
        if (!j.at("tol").is_number()) {
            throw ValidationError("\"tol\" must be a number");
        }
        return j.at("tol").get<double>();
    }
    return kDefaultTol;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) {
        throw ValidationError("cannot write " + path);
    }
    f << text;
}

void emit_json(const Json& j, const Options& opt, std::ostream& out) {
    const auto text = j.dump(2) + "\n";
    if (opt.out.empty()) {
        out << text;
    } else {
        write_file(opt.out, text);
    }
}

std::string g12(double x) { return fmt::format("{:.12g}", x); }

int cmd_solve(const Options& opt, std::ostream& out) {
    const auto in = read_input(opt.input);
    const auto mu = measure_from_json(field(in, "measure"));
    const auto domain = open_set_from_json(field(in, "open_set"));
    const auto sol = solve(mu, domain, input_tol(in, opt));
    emit_json(to_json(sol), opt, out);
    if (!opt.csv.empty()) {
        std::string csv = "component,c,e,f,d,k,beta\n";
        for (std::size_t n = 0; n < sol.blocks.size(); ++n) {
            const auto& b = sol.blocks[n];
            csv += fmt::format("{},{},{},{},{},{},{}\n", n, g12(b.c), g12(b.e), g12(b.f), g12(b.d),
                               g12(sol.provenance[n].mass), g12(sol.provenance[n].moment));
        }
        write_file(opt.csv, csv);
    }
    return kOk;
}

int cmd_order(const Options& opt, std::ostream& out) {
    const auto in = read_input(opt.input);
    const auto mu = measure_from_json(field(in, "mu"));
    const auto nu = measure_from_json(field(in, "nu"));
    const auto domain = open_set_from_json(field(in, "open_set"));
    emit_json(to_json(order_leq_sh_O(mu, nu, domain, input_tol(in, opt))), opt, out);
    return kOk;
}

int cmd_potential(const Options& opt, std::ostream& out) {
    const auto in = read_input(opt.input);
    const auto mu = measure_from_json(field(in, "measure"));
    const auto u = potential(mu);
    emit_json(to_json(u), opt, out);
    if (!opt.csv.empty()) {
        const auto& br = mu.breaks();
        const double lo = br.empty() ? -1.0 : br.front() - 0.5;
        const double hi = br.empty() ? 1.0 : br.back() + 0.5;
        const int samples = in.value("samples", 401);
        if (samples < 2) {
            throw ValidationError("\"samples\" must be at least 2");
        }
        std::string csv = "y,U,dU\n";
        for (int i = 0; i < samples; ++i) {
            const double y = lo + (hi - lo) * i / (samples - 1);
            csv += fmt::format("{},{},{}\n", g12(y), g12(u(y)), g12(u.derivative(y)));
        }
        write_file(opt.csv, csv);
    }
    return kOk;
}

int cmd_simulate(const Options& opt, std::ostream& out) {
    const auto in = read_input(opt.input);
    const auto mu = measure_from_json(field(in, "measure"));
    const auto domain = open_set_from_json(field(in, "open_set"));
    auto cfg = sim_config_from_json(in.value("config", Json{}));
    if (opt.seed) {
        cfg.seed = *opt.seed;
    }
    const auto report = run(mu, domain, cfg);
    auto j = to_json(report);
    j["config"] = to_json(cfg);

    if (report.complete()) {
        const auto sol = solve(mu, domain, input_tol(in, opt));
        const auto errs = compare_to_formula(report, sol);
        Json cmp = Json::array();
        for (std::size_t n = 0; n < errs.size(); ++n) {
            cmp.push_back({{"p", number(sol.blocks[n].left_width())},
                           {"q", number(sol.blocks[n].right_width())},
                           {"p_error", number(errs[n].p_error)},
                           {"q_error", number(errs[n].q_error)},
                           {"histogram_l1", number(errs[n].histogram_l1)},
                           {"frozen_l1", number(errs[n].frozen_l1)},
                           {"standard_error", number(errs[n].standard_error)}});
        }
        j["comparison"] = cmp;
    }
    emit_json(j, opt, out);

    if (!opt.hist.empty()) {
        std::string csv = "component,lo,hi,density\n";
        for (std::size_t n = 0; n < report.components.size(); ++n) {
            const auto& h = report.components[n].histogram;
            const auto& br = h.breaks();
            for (std::size_t i = 0; i + 1 < br.size(); ++i) {
                csv += fmt::format("{},{},{},{}\n", n, g12(br[i]), g12(br[i + 1]), g12(h.values()[i]));
            }
        }
        write_file(opt.hist, csv);
    }
    return report.complete() ? kOk : kIncomplete;
}

std::vector<LipschitzFamilyParams> lipschitz_sweep(const Json& in) {
    std::vector<LipschitzFamilyParams> ps;
    if (in.is_object() && in.contains("params")) {
        const auto& arr = in.at("params");
        if (!arr.is_array()) {
            throw ValidationError("\"params\" must be an array");
        }
        for (const auto& p : arr) {
            ps.push_back(lipschitz_params_from_json(p));
        }
        return ps;
    }
    // Default sweep: x = r = 0.9, c = 0.99, y from 0.01 down towards 0.
    for (int i = 0; i < 12; ++i) {
        ps.push_back({0.9, 0.01 * std::pow(0.5, i), 0.9, 0.99});
    }
    return ps;
}

int cmd_stability(const Options& opt, std::ostream& out) {
    const Json in = opt.input.empty() ? Json{} : read_input(opt.input);
    const double tol = input_tol(in, opt);

    if (opt.family == "lipschitz") {
        Json rows = Json::array();
        std::string csv = "x,y,r,c,input_gap,output_gap,ratio,closed_form_ratio,closed_form_output_gap,in_regime\n";
        for (const auto& p : lipschitz_sweep(in)) {
            const auto rep = lipschitz_ratio(p, tol);
            rows.push_back({{"x", number(p.x)},
                            {"y", number(p.y)},
                            {"r", number(p.r)},
                            {"c", number(p.c)},
                            {"input_gap", number(rep.input_l1_gap)},
                            {"output_gap", number(rep.output_l1_gap)},
                            {"ratio", number(rep.ratio)},
                            {"closed_form_ratio", number(rep.closed_form_ratio)},
                            {"closed_form_output_gap", number(rep.closed_form_output_gap)},
                            {"in_regime", p.in_closed_form_regime()}});
            csv += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", g12(p.x), g12(p.y), g12(p.r), g12(p.c),
                               g12(rep.input_l1_gap), g12(rep.output_l1_gap), g12(rep.ratio),
                               g12(rep.closed_form_ratio), g12(rep.closed_form_output_gap),
                               p.in_closed_form_regime() ? 1 : 0);
        }
        emit_json({{"family", "lipschitz"}, {"rows", rows}}, opt, out);
        if (!opt.csv.empty()) {
            write_file(opt.csv, csv);
        }
        return kOk;
    }

    if (opt.family == "monotone") {
        StepMeasure mu1 = StepMeasure::indicator(0.0, std::sqrt(0.75), 0.99);
        StepMeasure mu2 = StepMeasure::indicator(-0.5, 1.0, 0.99);
        OpenSet1D domain = OpenSet1D::interval(-1.0, 1.0);
        if (in.is_object() && in.contains("mu1")) {
            mu1 = measure_from_json(in.at("mu1"));
            mu2 = measure_from_json(field(in, "mu2"));
            domain = open_set_from_json(field(in, "open_set"));
        }
        const auto rep = monotonicity_report(mu1, mu2, domain, tol);
        auto j = to_json(rep);
        j["family"] = "monotone";
        emit_json(j, opt, out);
        if (!opt.csv.empty()) {
            std::string csv = "measure,component,c,e,f,d\n";
            const MaximalSolution* sols[] = {&rep.first, &rep.second};
            for (int m = 0; m < 2; ++m) {
                for (std::size_t n = 0; n < sols[m]->blocks.size(); ++n) {
                    const auto& b = sols[m]->blocks[n];
                    csv += fmt::format("{},{},{},{},{},{}\n", m + 1, n, g12(b.c), g12(b.e), g12(b.f), g12(b.d));
                }
            }
            write_file(opt.csv, csv);
        }
        return kOk;
    }

    if (opt.family == "weak") {
        StepMeasure limit = StepMeasure::indicator(-0.5, 0.5);
        OpenSet1D domain = OpenSet1D::interval(-1.0, 1.0);
        std::vector<StepMeasure> seq;
        if (in.is_object() && in.contains("sequence")) {
            limit = measure_from_json(field(in, "limit"));
            domain = open_set_from_json(field(in, "open_set"));
            for (const auto& m : in.at("sequence")) {
                seq.push_back(measure_from_json(m));
            }
        } else {
            for (int l = 2; l <= 64; ++l) {
                seq.push_back(limit * (1.0 - 1.0 / l));
            }
        }
        const auto table = weak_convergence_experiment(seq, limit, domain, tol);
        Json rows = Json::array();
        std::string csv = "index,mass_gap,moment_gap,l1_gap,bound\n";
        for (const auto& r : table.rows) {
            rows.push_back({{"index", r.index},
                            {"mass_gap", number(r.mass_gap)},
                            {"moment_gap", number(r.moment_gap)},
                            {"l1_gap", number(r.l1_gap)},
                            {"bound", number(r.bound)}});
            csv += fmt::format("{},{},{},{},{}\n", r.index, g12(r.mass_gap), g12(r.moment_gap), g12(r.l1_gap),
                               g12(r.bound));
        }
        emit_json({{"family", "weak"},
                   {"rows", rows},
                   {"constant", number(table.constant)},
                   {"bounded", table.bounded}},
                  opt, out);
        if (!opt.csv.empty()) {
            write_file(opt.csv, csv);
        }
        return kOk;
    }
    throw ValidationError("unknown family " + opt.family + " (expected lipschitz, monotone or weak)");
}

int cmd_repro(const Options& opt, std::ostream& out) {
    const auto manifest = build_repro_manifest(opt.tol);
    if (opt.json) {
        emit_json(to_json(manifest), opt, out);
    } else if (opt.out.empty()) {
        out << format_table(manifest);
    } else {
        write_file(opt.out, format_table(manifest));
    }
    return manifest.pass ? kOk : kReproFailure;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Maximal solutions of the one-dimensional supercooled Stefan problem"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub, bool needs_input) {
        auto* input = sub->add_option("--input", opt.input, "Input JSON file");
        if (needs_input) {
            input->required();
        }
        sub->add_option("--out", opt.out, "Write JSON here instead of stdout");
        sub->add_option("--tol", opt.tol, "Verification tolerance");
    };

    auto* solve_cmd = app.add_subcommand("solve", "Compute and certify the maximal solution");
    add_common(solve_cmd, true);
    solve_cmd->add_option("--csv", opt.csv, "Block endpoints as CSV");

    auto* order_cmd = app.add_subcommand("order", "Check mu <= nu in subharmonic order on O");
    add_common(order_cmd, true);

    auto* pot_cmd = app.add_subcommand("potential", "Exact potential of a step measure");
    add_common(pot_cmd, true);
    pot_cmd->add_option("--csv", opt.csv, "Sampled potential as CSV");

    auto* sim_cmd = app.add_subcommand("simulate", "Run the front-freezing particle system");
    add_common(sim_cmd, true);
    sim_cmd->add_option("--seed", opt.seed, "Override the configured seed");
    sim_cmd->add_option("--hist", opt.hist, "Frozen histogram as CSV");

    auto* stab_cmd = app.add_subcommand("stability", "Stability experiments");
    add_common(stab_cmd, false);
    stab_cmd->add_option("--family", opt.family, "lipschitz, monotone or weak")
        ->check(CLI::IsMember({"lipschitz", "monotone", "weak"}));
    stab_cmd->add_option("--csv", opt.csv, "Table as CSV");

    auto* repro_cmd = app.add_subcommand("repro", "Reproduce the published numbers");
    repro_cmd->add_option("--tol", opt.tol, "Replace every tolerance");
    repro_cmd->add_option("--out", opt.out, "Write output here instead of stdout");
    repro_cmd->add_flag("--json", opt.json, "Machine-readable manifest");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and --version land here with exit code 0.
        std::ostringstream o;
        std::ostringstream e_;
        const int code = app.exit(e, o, e_);
        out << o.str();
        err << e_.str();
        return code == 0 ? kOk : kParseError;
    }

    try {
        if (*solve_cmd) return cmd_solve(opt, out);
        if (*order_cmd) return cmd_order(opt, out);
        if (*pot_cmd) return cmd_potential(opt, out);
        if (*sim_cmd) return cmd_simulate(opt, out);
        if (*stab_cmd) return cmd_stability(opt, out);
        if (*repro_cmd) return cmd_repro(opt, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kParseError;
    } catch (const VerificationError& e) {
        err << "verification failed: " << e.what() << "\n";
        return kVerificationError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kParseError;
    }
    return kParseError;
}

} // namespace stefan1d::cli
