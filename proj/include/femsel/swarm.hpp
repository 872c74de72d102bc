#pragma once

#include "femsel/beam_structure.hpp"
#include "femsel/objective.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace femsel {

enum class InertiaMode { none, adaptive };

/// `corrected`: (w_start - w_end) / (N * w_f), reaching w_end exactly when the
/// decrement stops. `literal`: (w_start - w_end) / (N - w_f).
enum class InertiaDecrement { corrected, literal };

/// How the per-iteration fitness evaluations are scheduled. Both produce the
/// same trace; `serial` is the reference.
enum class Execution { serial, parallel };

struct SwarmConfig {
    double c1 = 2.0;
    double c2 = 2.0;
    int n_iterations = 500;
    int n_particles = 8;
    double w_start = 1.2;
    double w_end = 0.4;
    double w_f = 0.5;
    InertiaMode inertia_mode = InertiaMode::adaptive;
    InertiaDecrement inertia_decrement = InertiaDecrement::corrected;
    double m_max = 7.5e10;
    double m_min = 5.5e10;
    double v_max = 2.0e10;
    double v_min = 1.0e9;
    double init_mean = 7.2e10;
    double init_std = std::sqrt(0.5e20);
    ObjectiveKind objective_kind = ObjectiveKind::aic;
    std::uint64_t seed = 1;

    /// Throws ConfigValidationError naming the first offending field.
    void validate() const;
};

std::string_view to_string(InertiaMode mode);
std::string_view to_string(InertiaDecrement decrement);

/// Seeded source of the swarm's random numbers.
///
/// Draw order: initialization visits particles in index order and, for each
/// active dimension, takes (q, velocity magnitude, velocity sign). Each step
/// visits particles in index order and, for each of the five dimensions,
/// takes (r1, r2).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    double uniform() { return uniform_(engine_); }
    double normal() { return normal_(engine_); }
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

struct Particle {
    std::size_t active_dims = 0;
    ParameterVector position{};
    ParameterVector velocity{};
    ParameterVector pbest_position{};
    double pbest_fitness = std::numeric_limits<double>::infinity();
    double fitness = std::numeric_limits<double>::quiet_NaN();  // latest evaluation
};

struct SwarmState {
    std::vector<Particle> particles;
    ParameterVector gbest_position{};
    double gbest_fitness = std::numeric_limits<double>::infinity();
    std::size_t gbest_index = 0;
    int iteration = 0;
    double w = 1.0;  // weight applied on the next step
};

/// Fitness of particle `index` at `position`. Lower is better. Failures are
/// reported by throwing; the engine records them and keeps the previous pbest.
/// Must be safe to call concurrently for different particles.
using FitnessFn = std::function<double(std::size_t index, const ParameterVector& position)>;

struct EvaluationFailure {
    int iteration;  // 0 = initialization
    std::size_t particle;
    std::string reason;
};

struct IterationRow {
    int iteration;  // 1-based
    double w;
    std::size_t gbest_index;
    double gbest_fitness;
    std::vector<double> fitness;
    std::vector<double> pbest_fitness;
    std::vector<ParameterVector> positions;
    std::vector<ParameterVector> velocities;
};

struct SwarmRecord {
    std::uint64_t seed = 0;
    double initial_gbest_fitness = 0.0;
    std::size_t initial_gbest_index = 0;
    std::vector<IterationRow> rows;
    std::vector<EvaluationFailure> failures;
    SwarmState final_state;
    std::vector<std::size_t> ranking;  // particle indices, ascending pbest fitness
    int converged_at = 0;              // last iteration that improved gbest
};

/// Inertia weight applied at the step that starts from `iteration` (0-based).
double inertia_schedule(const SwarmConfig& config, int iteration);

double clamp_position(double value, const SwarmConfig& config);

/// Clamps the signed velocity to +-v_max, then lifts magnitudes below v_min to
/// v_min keeping the sign (zero counts as positive).
double clamp_velocity(double value, const SwarmConfig& config);

/// Velocity update using pre-drawn (r1, r2) pairs, ten values in dimension order.
ParameterVector update_velocity(const Particle& particle, const ParameterVector& gbest, double w,
                                const SwarmConfig& config, std::span<const double, 10> draws);

ParameterVector update_velocity(const Particle& particle, const ParameterVector& gbest, double w,
                                const SwarmConfig& config, RngStream& rng);

/// position + velocity, clamped to [m_min, m_max] in every dimension.
ParameterVector update_position(const Particle& particle, const SwarmConfig& config);

SwarmState init_swarm(const SwarmConfig& config, std::span<const std::size_t> active_dims,
                      RngStream& rng, const FitnessFn& fitness,
                      Execution execution = Execution::serial,
                      std::vector<EvaluationFailure>* failures = nullptr);

/// One iteration. Returns the trace row for the iteration just completed.
IterationRow step(SwarmState& state, const SwarmConfig& config, const FitnessFn& fitness,
                  RngStream& rng, Execution execution = Execution::serial,
                  std::vector<EvaluationFailure>* failures = nullptr);

/// Initialization followed by config.n_iterations steps.
SwarmRecord run(const SwarmConfig& config, std::span<const std::size_t> active_dims,
                const FitnessFn& fitness, Execution execution = Execution::parallel);

}  // namespace femsel
