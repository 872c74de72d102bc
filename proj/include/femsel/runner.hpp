#pragma once

#include "femsel/beam_structure.hpp"
#include "femsel/fem_core.hpp"
#include "femsel/modal.hpp"
#include "femsel/objective.hpp"
#include "femsel/swarm.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace femsel {

/// Frequency pipeline for the H-beam: per-element moduli, assembly, modal
/// solve and selection of the measured ranks. Immutable, so one instance can
/// serve concurrent evaluations.
class HBeamModel {
public:
    HBeamModel();

    const BeamGeometry& geometry() const { return geometry_; }
    const Material& material() const { return material_; }
    const CrossSection& section() const { return section_; }
    const MeasuredData& measured() const { return measured_; }

    GlobalSystem system(const ModelSpec& model, const ParameterVector& position) const;
    ModalResult modal(const ModelSpec& model, const ParameterVector& position,
                      bool with_mode_shapes = false) const;
    std::array<double, 5> selected_frequencies(const ModelSpec& model,
                                               const ParameterVector& position) const;

    ObjectiveValue evaluate(const ModelSpec& model, const ParameterVector& position,
                            ObjectiveKind kind) const;

private:
    BeamGeometry geometry_;
    Material material_;
    CrossSection section_;
    MeasuredData measured_;
    EigenSolveConfig eigen_;
};

/// Scores one model at one particle position. Pure in (model, position, kind).
ObjectiveValue evaluate_model(const ModelSpec& model, const ParameterVector& position,
                              ObjectiveKind kind);

/// Position with every active slot at the nominal modulus and the rest zero.
ParameterVector nominal_position(const ModelSpec& model);

struct ExperimentConfig {
    SwarmConfig swarm;
    std::optional<int> preset;
    std::filesystem::path output_dir = "out";
    bool emit_mode_shapes = false;
    Execution execution = Execution::parallel;
};

/// Simulation settings 1-4: {none, AIC}, {none, SSE}, {adaptive, AIC}, {adaptive, SSE}.
/// Throws ConfigValidationError for other numbers.
void apply_preset(SwarmConfig& swarm, int simulation);
ExperimentConfig preset_config(int simulation, std::uint64_t seed,
                               std::filesystem::path output_dir);

/// Parses and validates a JSON experiment document.
/// Throws ConfigParseError for malformed JSON and ConfigValidationError for
/// unknown keys, wrong types or out-of-range values.
ExperimentConfig parse_config(const std::string& text);

/// Throws ConfigFileError when the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

struct RankingEntry {
    int model_id;
    std::size_t d;
    double fitness;
    ParameterVector position;
};

struct RunRecord {
    ExperimentConfig config;
    SwarmRecord swarm;
    std::vector<RankingEntry> ranking;

    int gbest_model_id() const { return static_cast<int>(swarm.final_state.gbest_index) + 1; }
    int converged_at() const { return swarm.converged_at; }
};

/// Models by ascending final pbest fitness; ties go to smaller d, then smaller id.
std::vector<RankingEntry> rank_models(const SwarmRecord& record);

/// Runs the eight catalog models as one swarm without touching the filesystem.
RunRecord execute_experiment(const ExperimentConfig& config);

/// execute_experiment plus convergence.csv and result.json (and mode_shapes.csv
/// when requested) in config.output_dir. Throws IoError on write failure.
RunRecord run_experiment(const ExperimentConfig& config);

std::string convergence_csv(const RunRecord& record);
std::string result_json(const RunRecord& record);
std::string config_json(const ExperimentConfig& config);

/// "%.17g" formatting used in every output file.
std::string format_number(double value);

std::string describe_geometry();
std::string describe_catalog();
/// rank,frequency_hz,rigid_body_flag for all 78 modes.
std::string describe_modal(int model_id, const ParameterVector& position);
std::string matrix_csv(const Eigen::MatrixXd& matrix);
std::string mode_shapes_csv(const ModalResult& result);

}  // namespace femsel
