#include "stefan1d/particles.hpp"

#include "stefan1d/errors.hpp"

#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>
#include <string>

namespace stefan1d {

namespace {

enum Purpose : std::uint64_t { kInitial = 1, kWalk = 2 };

// Bridge crossing probabilities below exp(-40) are skipped.
constexpr double kBridgeCutoff = 40.0;

struct Frozen {
    double position;
    double time;
};

ComponentRun run_component(const StepMeasure& part, Interval comp, std::size_t index, std::size_t particles,
                           const SimConfig& cfg) {
    ComponentRun out;
    out.component = comp;
    out.target = {part.mass(), part.first_moment()};
    out.particles = particles;
    out.fronts = {comp.lo, comp.hi, 0, 0};
    const double length = comp.length();
    out.effective_dt = cfg.dt * length * length;
    if (particles == 0 || out.target.mass <= 0.0) {
        out.particles = 0;
        return out;
    }
    const double m = out.target.mass / static_cast<double>(particles);
    out.particle_mass = m;

    const std::uint64_t component_seed = CounterRng::mix(cfg.seed + 0x51ED27A4ULL * (index + 1));
    std::vector<double> x = sample_initial(part, particles, component_seed);

    std::vector<CounterRng> rng;
    rng.reserve(particles);
    for (std::size_t i = 0; i < particles; ++i) {
        rng.emplace_back(CounterRng::derive(cfg.seed, index, i, kWalk));
    }

    std::vector<std::uint32_t> active(particles);
    std::iota(active.begin(), active.end(), 0U);
    std::vector<Frozen> frozen;
    frozen.reserve(particles);

    const double dt = out.effective_dt;
    const double sd = std::sqrt(dt);
    const auto max_steps = static_cast<std::size_t>(std::ceil(cfg.t_max / dt));
    boost::random::normal_distribution<double> normal;
    FrontState& f = out.fronts;

    auto freeze_left = [&](double t) {
        frozen.push_back({f.left + 0.5 * m, t});
        f.left += m;
        ++f.left_count;
    };
    auto freeze_right = [&](double t) {
        frozen.push_back({f.right - 0.5 * m, t});
        f.right -= m;
        ++f.right_count;
    };

    std::size_t step = 0;
    while (!active.empty() && step < max_steps) {
        ++step;
        const double t = static_cast<double>(step) * dt;
        std::size_t keep = 0;
        for (std::size_t slot = 0; slot < active.size(); ++slot) {
            const std::uint32_t i = active[slot];
            double& xi = x[i];
            // Already overrun by a front that advanced since this walker's last step.
            if (xi <= f.left) {
                freeze_left(t - dt);
                continue;
            }
            if (xi >= f.right) {
                freeze_right(t - dt);
                continue;
            }
            const double before = xi;
            xi += sd * normal(rng[i]);
            const bool past_left = xi <= f.left;
            const bool past_right = xi >= f.right;
            if (past_left && past_right) {
                if (f.left - xi <= xi - f.right) {
                    freeze_left(t);
                } else {
                    freeze_right(t);
                }
                continue;
            }
            if (past_left) {
                freeze_left(t);
                continue;
            }
            if (past_right) {
                freeze_right(t);
                continue;
            }
            if (cfg.bridge_correction) {
                const double lam_left = 2.0 * (before - f.left) * (xi - f.left) / dt;
                const double lam_right = 2.0 * (f.right - before) * (f.right - xi) / dt;
                if (lam_left < kBridgeCutoff || lam_right < kBridgeCutoff) {
                    const double pl = std::exp(-lam_left);
                    const double pr = std::exp(-lam_right);
                    const double u = rng[i].uniform();
                    if (u < pl) {
                        freeze_left(t);
                        continue;
                    }
                    if (u < pl + pr) {
                        freeze_right(t);
                        continue;
                    }
                }
            }
            active[keep++] = i;
        }
        active.resize(keep);
        if (f.left > f.right + 1e-12 * std::max(1.0, length)) {
            throw std::logic_error("fronts crossed: mass accounting is broken");
        }
    }

    out.steps = step;
    out.unfrozen = active.size();
    out.p_hat = static_cast<double>(f.left_count) * m;
    out.q_hat = static_cast<double>(f.right_count) * m;

    if (!frozen.empty()) {
        double sum_t = 0.0;
        double sum_x = 0.0;
        for (const auto& fr : frozen) {
            if (fr.position < comp.lo || fr.position > comp.hi) {
                throw std::logic_error("frozen particle recorded outside its component");
            }
            sum_t += fr.time;
            sum_x += fr.position;
        }
        const double count = static_cast<double>(frozen.size());
        out.mean_freeze_time = sum_t / count;
        out.mean_freeze_position = sum_x / count;
        double ss = 0.0;
        for (const auto& fr : frozen) {
            ss += (fr.position - out.mean_freeze_position) * (fr.position - out.mean_freeze_position);
        }
        out.freeze_position_std = frozen.size() > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
    }

    const std::size_t bins = std::max<std::size_t>(1, cfg.histogram_bins);
    std::vector<double> edges(bins + 1);
    std::vector<double> dens(bins, 0.0);
    const double width = length / static_cast<double>(bins);
    for (std::size_t b = 0; b <= bins; ++b) {
        edges[b] = b == bins ? comp.hi : comp.lo + width * static_cast<double>(b);
    }
    for (const auto& fr : frozen) {
        auto b = static_cast<std::size_t>((fr.position - comp.lo) / width);
        dens[std::min(b, bins - 1)] += m / width;
    }
    out.histogram = StepMeasure::make(edges, dens);
    return out;
}

} // namespace

void SimConfig::validate() const {
    if (n_particles < 1) {
        throw ValidationError("n_particles must be >= 1");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ValidationError("dt must be > 0");
    }
    if (!(t_max > 0.0) || !std::isfinite(t_max)) {
        throw ValidationError("t_max must be > 0");
    }
    if (n_particles > std::numeric_limits<std::uint32_t>::max()) {
        throw ValidationError("n_particles too large");
    }
}

std::size_t RunReport::unfrozen() const {
    std::size_t total = 0;
    for (const auto& c : components) {
        total += c.unfrozen;
    }
    return total;
}

std::vector<double> sample_initial(const StepMeasure& mu, std::size_t n, std::uint64_t seed) {
    const double k = mu.mass();
    if (!(k > 0.0)) {
        throw SamplingError("cannot sample from a zero-mass measure");
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        CounterRng rng(CounterRng::derive(seed, 0, i, kInitial));
        out[i] = mu.quantile(std::min(rng.uniform() * k, k));
    }
    return out;
}

std::vector<std::size_t> allocate_particles(std::span<const ComponentData> parts, std::size_t total) {
    double k = 0.0;
    for (const auto& p : parts) {
        k += std::max(0.0, p.mass);
    }
    std::vector<std::size_t> counts(parts.size(), 0);
    if (!(k > 0.0)) {
        return counts;
    }
    for (std::size_t n = 0; n < parts.size(); ++n) {
        if (parts[n].mass > 0.0) {
            const double share = static_cast<double>(total) * parts[n].mass / k;
            counts[n] = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(share)));
        }
    }
    return counts;
}

RunReport run(const StepMeasure& mu, const OpenSet1D& domain, const SimConfig& cfg) {
    cfg.validate();
    if (mu.sup_density() > 1.0 + kDefaultTol) {
        throw AdmissibilityError("initial density exceeds 1");
    }
    const auto parts = restrict(mu, domain);
    std::vector<ComponentData> data;
    for (const auto& p : parts) {
        data.push_back({p.mass(), p.first_moment()});
    }
    const auto counts = allocate_particles(data, cfg.n_particles);

    RunReport report;
    report.components.resize(domain.size());
    if (cfg.parallel_components && domain.size() > 1) {
        std::vector<std::future<ComponentRun>> jobs;
        for (std::size_t n = 0; n < domain.size(); ++n) {
            jobs.push_back(std::async(std::launch::async, run_component, std::cref(parts[n]),
                                      domain.components()[n], n, counts[n], std::cref(cfg)));
        }
        for (std::size_t n = 0; n < domain.size(); ++n) {
            report.components[n] = jobs[n].get();
        }
    } else {
        for (std::size_t n = 0; n < domain.size(); ++n) {
            report.components[n] = run_component(parts[n], domain.components()[n], n, counts[n], cfg);
        }
    }

    std::vector<Interval> blocks;
    for (const auto& c : report.components) {
        blocks.push_back({c.component.lo, c.component.lo + c.p_hat});
        blocks.push_back({c.component.hi - c.q_hat, c.component.hi});
    }
    report.frozen = StepMeasure::union_of(blocks);
    return report;
}

std::vector<ComponentError> compare_to_formula(const RunReport& report, const MaximalSolution& solution) {
    if (report.components.size() != solution.blocks.size()) {
        throw ValidationError("report has " + std::to_string(report.components.size()) +
                              " components, solution has " + std::to_string(solution.blocks.size()));
    }
    std::vector<ComponentError> out;
    for (std::size_t n = 0; n < report.components.size(); ++n) {
        const auto& run = report.components[n];
        const auto& bp = solution.blocks[n];
        if (run.component.lo != bp.c || run.component.hi != bp.d) {
            throw ValidationError("component " + std::to_string(n) + " differs between report and solution", n);
        }
        const double p = bp.left_width();
        const double q = bp.right_width();
        const auto exact = bp.measure();
        const Interval frozen_blocks[] = {{bp.c, bp.c + run.p_hat}, {bp.d - run.q_hat, bp.d}};
        ComponentError e;
        e.p_error = std::abs(run.p_hat - p);
        e.q_error = std::abs(run.q_hat - q);
        e.histogram_l1 = l1_distance(run.histogram, exact);
        e.frozen_l1 = l1_distance(StepMeasure::union_of(frozen_blocks), exact);
        e.standard_error = run.particles > 0 ? std::sqrt(p * q / static_cast<double>(run.particles)) : 0.0;
        out.push_back(e);
    }
    return out;
}

} // namespace stefan1d
