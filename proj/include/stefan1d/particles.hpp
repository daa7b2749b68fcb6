#pragma once

#include "stefan1d/maximal.hpp"
#include "stefan1d/measure.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace stefan1d {

/**
 * Counter-based uniform bit source (SplitMix64). Every particle owns one,
 * keyed by (seed, component, particle, purpose), so the draws of a particle do
 * not depend on how many other particles exist or in which order they run.
 */
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t key) : state_(key) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Stream key for one particle.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t component, std::uint64_t particle,
                                std::uint64_t purpose) {
        std::uint64_t h = mix(seed ^ 0x6A09E667F3BCC909ULL);
        h = mix(h ^ (component + 0x3C6EF372FE94F82BULL));
        h = mix(h ^ (purpose * 0xA54FF53A5F1D36F1ULL));
        return mix(h + particle * 0x9E3779B97F4A7C15ULL);
    }

private:
    std::uint64_t state_;
};

struct SimConfig {
    std::size_t n_particles = 10000;
    /// Time step on a unit-length component; a component of length L steps with dt * L^2.
    double dt = 1e-4;
    std::uint64_t seed = 1;
    /// Absolute simulated-time limit.
    double t_max = 20.0;
    bool parallel_components = false;
    /// Also freeze walkers whose Brownian bridge over the last step touched a
    /// front (probability exp(-2 a b / dt)). Removes the O(sqrt dt) bias of
    /// checking the fronts only at step ends.
    bool bridge_correction = true;
    std::size_t histogram_bins = 64;

    void validate() const;
};

/// Fronts of one component: (c, left) and (right, d) are frozen solid.
struct FrontState {
    double left = 0.0;
    double right = 0.0;
    std::size_t left_count = 0;
    std::size_t right_count = 0;
};

struct ComponentRun {
    Interval component;
    ComponentData target;          // (k_n, beta_n) of the initial measure
    std::size_t particles = 0;
    double particle_mass = 0.0;    // k_n / particles
    double effective_dt = 0.0;
    FrontState fronts;
    double p_hat = 0.0;            // left_count * particle_mass
    double q_hat = 0.0;            // right_count * particle_mass
    std::size_t unfrozen = 0;
    std::size_t steps = 0;
    double mean_freeze_time = 0.0;
    double mean_freeze_position = 0.0;
    double freeze_position_std = 0.0;
    /// Frozen mass per bin divided by bin width, bins spanning the component.
    StepMeasure histogram;
};

struct RunReport {
    std::vector<ComponentRun> components;
    /// Union of the frozen blocks (c_n, c_n + p_hat) and (d_n - q_hat, d_n).
    StepMeasure frozen;

    std::size_t unfrozen() const;
    bool complete() const { return unfrozen() == 0; }
};

/// n draws from mu / mass(mu) by inverse transform, deterministic in seed.
/// Throws SamplingError for a zero-mass measure.
std::vector<double> sample_initial(const StepMeasure& mu, std::size_t n, std::uint64_t seed);

/**
 * Front-freezing particle system on every component of O.
 *
 * Walkers start from sample_initial and take Gaussian steps of variance
 * dt_eff. Within a step they are processed in index order; one that ends at or
 * beyond the left front freezes there and the front advances by the particle
 * mass, and likewise on the right. Walkers still active at t_max are reported,
 * not thrown.
 */
RunReport run(const StepMeasure& mu, const OpenSet1D& domain, const SimConfig& cfg);

/// Particle counts per component, proportional to mass (at least one for every
/// component with positive mass).
std::vector<std::size_t> allocate_particles(std::span<const ComponentData> parts, std::size_t total);

struct ComponentError {
    double p_error = 0.0;
    double q_error = 0.0;
    double histogram_l1 = 0.0;     // L1 distance between histogram and the exact blocks
    double frozen_l1 = 0.0;        // L1 distance between frozen blocks and the exact blocks
    double standard_error = 0.0;   // sqrt(p q / n)
};

/// Throws ValidationError if the report and solution cover different components.
std::vector<ComponentError> compare_to_formula(const RunReport& report, const MaximalSolution& solution);

} // namespace stefan1d
