#include "femsel/swarm.hpp"

#include "femsel/errors.hpp"

#include <algorithm>
#include <array>
#include <exception>
#include <numeric>
#include <optional>

namespace femsel {

namespace {

void require(bool ok, const char* key, const std::string& message) {
    if (!ok) throw ConfigValidationError(std::string(key) + ": " + message, key);
}

struct Evaluation {
    std::optional<double> value;
    std::string error;
};

// Evaluates every particle at its current position. Exceptions are captured
// per particle so that one failure does not abort the others.
std::vector<Evaluation> evaluate_all(const std::vector<Particle>& particles,
                                     const FitnessFn& fitness, Execution execution) {
    const auto n = static_cast<long>(particles.size());
    std::vector<Evaluation> out(particles.size());
    auto eval_one = [&](long i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            out[idx].value = fitness(idx, particles[idx].position);
        } catch (const std::exception& ex) {
            out[idx].error = ex.what();
        } catch (...) {
            out[idx].error = "unknown error";
        }
    };
    if (execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long i = 0; i < n; ++i) eval_one(i);
    } else {
        for (long i = 0; i < n; ++i) eval_one(i);
    }
    return out;
}

// Applies evaluations in particle order; updates pbest on strict improvement.
void absorb(SwarmState& state, const std::vector<Evaluation>& evals,
            std::vector<EvaluationFailure>* failures) {
    for (std::size_t i = 0; i < evals.size(); ++i) {
        Particle& p = state.particles[i];
        if (!evals[i].value) {
            p.fitness = std::numeric_limits<double>::quiet_NaN();
            if (failures != nullptr) failures->push_back({state.iteration, i, evals[i].error});
            continue;
        }
        p.fitness = *evals[i].value;
        if (p.fitness < p.pbest_fitness) {
            p.pbest_fitness = p.fitness;
            p.pbest_position = p.position;
        }
    }
}

bool refresh_gbest(SwarmState& state) {
    bool improved = false;
    for (std::size_t i = 0; i < state.particles.size(); ++i) {
        const Particle& p = state.particles[i];
        if (p.pbest_fitness < state.gbest_fitness) {
            state.gbest_fitness = p.pbest_fitness;
            state.gbest_position = p.pbest_position;
            state.gbest_index = i;
            improved = true;
        }
    }
    return improved;
}

}  // namespace

void SwarmConfig::validate() const {
    require(c1 >= 0.0, "c1", "must be non-negative");
    require(c2 >= 0.0, "c2", "must be non-negative");
    require(n_iterations >= 1, "n_iterations", "must be at least 1");
    require(n_particles >= 1, "n_particles", "must be at least 1");
    require(w_start >= 0.0, "w_start", "must be non-negative");
    require(w_end >= 0.0, "w_end", "must be non-negative");
    require(w_f > 0.0 && w_f <= 1.0, "w_f", "must lie in (0, 1]");
    require(m_min < m_max, "m_min", "must be below m_max");
    require(v_min > 0.0, "v_min", "must be positive");
    require(v_min < v_max, "v_max", "must exceed v_min");
    require(init_std >= 0.0, "init_std", "must be non-negative");
    require(std::isfinite(init_mean), "init_mean", "must be finite");
}

std::string_view to_string(InertiaMode mode) {
    return mode == InertiaMode::adaptive ? "adaptive" : "none";
}

std::string_view to_string(InertiaDecrement decrement) {
    return decrement == InertiaDecrement::literal ? "literal" : "corrected";
}

double inertia_schedule(const SwarmConfig& config, int iteration) {
    if (config.inertia_mode == InertiaMode::none) return 1.0;
    const double n = static_cast<double>(config.n_iterations);
    const double span = config.w_start - config.w_end;
    const double w_dec = config.inertia_decrement == InertiaDecrement::corrected
                             ? span / (n * config.w_f)
                             : span / (n - config.w_f);
    if (static_cast<double>(iteration) < n * config.w_f) {
        return std::max(config.w_start - static_cast<double>(iteration) * w_dec, config.w_end);
    }
    return config.w_end;
}

double clamp_position(double value, const SwarmConfig& config) {
    return std::clamp(value, config.m_min, config.m_max);
}

double clamp_velocity(double value, const SwarmConfig& config) {
    const double v = std::clamp(value, -config.v_max, config.v_max);
    if (std::abs(v) < config.v_min) return v < 0.0 ? -config.v_min : config.v_min;
    return v;
}

ParameterVector update_velocity(const Particle& particle, const ParameterVector& gbest, double w,
                                const SwarmConfig& config, std::span<const double, 10> draws) {
    ParameterVector v{};
    for (std::size_t k = 0; k < kMaxParameters; ++k) {
        const double r1 = draws[2 * k];
        const double r2 = draws[2 * k + 1];
        const double m = particle.position[k];
        const double raw = w * particle.velocity[k] +
                           config.c1 * r1 * (particle.pbest_position[k] - m) +
                           config.c2 * r2 * (gbest[k] - m);
        v[k] = clamp_velocity(raw, config);
    }
    return v;
}

ParameterVector update_velocity(const Particle& particle, const ParameterVector& gbest, double w,
                                const SwarmConfig& config, RngStream& rng) {
    std::array<double, 10> draws{};
    for (double& r : draws) r = rng.uniform();
    return update_velocity(particle, gbest, w, config, std::span<const double, 10>(draws));
}

ParameterVector update_position(const Particle& particle, const SwarmConfig& config) {
    ParameterVector m{};
    for (std::size_t k = 0; k < kMaxParameters; ++k) {
        m[k] = clamp_position(particle.position[k] + particle.velocity[k], config);
    }
    return m;
}

SwarmState init_swarm(const SwarmConfig& config, std::span<const std::size_t> active_dims,
                      RngStream& rng, const FitnessFn& fitness, Execution execution,
                      std::vector<EvaluationFailure>* failures) {
    SwarmState state;
    state.particles.resize(active_dims.size());
    for (std::size_t i = 0; i < active_dims.size(); ++i) {
        Particle& p = state.particles[i];
        p.active_dims = std::min(active_dims[i], kMaxParameters);
        for (std::size_t k = 0; k < p.active_dims; ++k) {
            const double q = rng.normal();
            p.position[k] = clamp_position(config.init_mean + q * config.init_std, config);
            const double magnitude = config.v_min + rng.uniform() * (config.v_max - config.v_min);
            p.velocity[k] = rng.uniform() < 0.5 ? -magnitude : magnitude;
        }
        p.pbest_position = p.position;
    }

    absorb(state, evaluate_all(state.particles, fitness, execution), failures);
    refresh_gbest(state);
    state.iteration = 0;
    state.w = inertia_schedule(config, 0);
    return state;
}

IterationRow step(SwarmState& state, const SwarmConfig& config, const FitnessFn& fitness,
                  RngStream& rng, Execution execution, std::vector<EvaluationFailure>* failures) {
    const std::size_t count = state.particles.size();

    // Every draw for the iteration is taken up front so the trace does not
    // depend on how the evaluations are scheduled.
    std::vector<std::array<double, 10>> draws(count);
    for (auto& row : draws) {
        for (double& r : row) r = rng.uniform();
    }

    const double w = state.w;
    for (std::size_t i = 0; i < count; ++i) {
        Particle& p = state.particles[i];
        p.velocity = update_velocity(p, state.gbest_position, w, config,
                                     std::span<const double, 10>(draws[i]));
        p.position = update_position(p, config);
    }

    ++state.iteration;
    absorb(state, evaluate_all(state.particles, fitness, execution), failures);
    refresh_gbest(state);
    state.w = inertia_schedule(config, state.iteration);

    IterationRow row{state.iteration, w, state.gbest_index, state.gbest_fitness, {}, {}, {}, {}};
    row.fitness.reserve(count);
    row.pbest_fitness.reserve(count);
    row.positions.reserve(count);
    row.velocities.reserve(count);
    for (const Particle& p : state.particles) {
        row.fitness.push_back(p.fitness);
        row.pbest_fitness.push_back(p.pbest_fitness);
        row.positions.push_back(p.position);
        row.velocities.push_back(p.velocity);
    }
    return row;
}

SwarmRecord run(const SwarmConfig& config, std::span<const std::size_t> active_dims,
                const FitnessFn& fitness, Execution execution) {
    config.validate();
    if (active_dims.size() != static_cast<std::size_t>(config.n_particles)) {
        throw ConfigValidationError("n_particles: does not match the number of models",
                                    "n_particles");
    }

    SwarmRecord record;
    record.seed = config.seed;
    RngStream rng(config.seed);
    SwarmState state = init_swarm(config, active_dims, rng, fitness, execution, &record.failures);
    record.initial_gbest_fitness = state.gbest_fitness;
    record.initial_gbest_index = state.gbest_index;

    record.rows.reserve(static_cast<std::size_t>(config.n_iterations));
    double previous = state.gbest_fitness;
    for (int t = 0; t < config.n_iterations; ++t) {
        record.rows.push_back(step(state, config, fitness, rng, execution, &record.failures));
        if (state.gbest_fitness < previous) record.converged_at = state.iteration;
        previous = state.gbest_fitness;
    }

    record.ranking.resize(state.particles.size());
    std::iota(record.ranking.begin(), record.ranking.end(), std::size_t{0});
    std::stable_sort(record.ranking.begin(), record.ranking.end(),
                     [&](std::size_t a, std::size_t b) {
                         return state.particles[a].pbest_fitness <
                                state.particles[b].pbest_fitness;
                     });
    record.final_state = std::move(state);
    return record;
}

}  // namespace femsel
