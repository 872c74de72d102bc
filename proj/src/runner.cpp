#include "femsel/runner.hpp"

#include "femsel/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace femsel {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Fitness pipeline

HBeamModel::HBeamModel()
    : geometry_(build_h_beam_geometry()),
      material_(nominal_material()),
      section_(nominal_section()),
      measured_(measured_h_beam()) {}

GlobalSystem HBeamModel::system(const ModelSpec& model, const ParameterVector& position) const {
    return assemble(geometry_, element_modulus_vector(model, position), material_, section_);
}

ModalResult HBeamModel::modal(const ModelSpec& model, const ParameterVector& position,
                              bool with_mode_shapes) const {
    return natural_frequencies(system(model, position), eigen_, with_mode_shapes);
}

std::array<double, 5> HBeamModel::selected_frequencies(const ModelSpec& model,
                                                       const ParameterVector& position) const {
    return select_modes(modal(model, position), measured_);
}

ObjectiveValue HBeamModel::evaluate(const ModelSpec& model, const ParameterVector& position,
                                    ObjectiveKind kind) const {
    const auto fem = selected_frequencies(model, position);
    return evaluate_objective(kind, residuals(measured_, fem), model.d());
}

namespace {

const HBeamModel& shared_model() {
    static const HBeamModel model;
    return model;
}

}  // namespace

ObjectiveValue evaluate_model(const ModelSpec& model, const ParameterVector& position,
                              ObjectiveKind kind) {
    return shared_model().evaluate(model, position, kind);
}

ParameterVector nominal_position(const ModelSpec& model) {
    ParameterVector p{};
    for (std::size_t j = 0; j < model.d(); ++j) p[j] = nominal_material().youngs_modulus_mean;
    return p;
}

// ---------------------------------------------------------------------------
// Configuration

void apply_preset(SwarmConfig& swarm, int simulation) {
    switch (simulation) {
        case 1: swarm.inertia_mode = InertiaMode::none; swarm.objective_kind = ObjectiveKind::aic; break;
        case 2: swarm.inertia_mode = InertiaMode::none; swarm.objective_kind = ObjectiveKind::sse; break;
        case 3: swarm.inertia_mode = InertiaMode::adaptive; swarm.objective_kind = ObjectiveKind::aic; break;
        case 4: swarm.inertia_mode = InertiaMode::adaptive; swarm.objective_kind = ObjectiveKind::sse; break;
        default:
            throw ConfigValidationError("preset: must be 1, 2, 3 or 4", "preset");
    }
    swarm.c1 = 2.0;
    swarm.c2 = 2.0;
}

ExperimentConfig preset_config(int simulation, std::uint64_t seed,
                               std::filesystem::path output_dir) {
    ExperimentConfig config;
    apply_preset(config.swarm, simulation);
    config.preset = simulation;
    config.swarm.seed = seed;
    config.output_dir = std::move(output_dir);
    return config;
}

namespace {

[[noreturn]] void invalid(const std::string& key, const std::string& message) {
    throw ConfigValidationError(key + ": " + message, key);
}

double get_number(const json& j, const std::string& key) {
    if (!j.is_number()) invalid(key, "expected a number");
    return j.get<double>();
}

int get_int(const json& j, const std::string& key) {
    if (!j.is_number_integer()) invalid(key, "expected an integer");
    return j.get<int>();
}

std::uint64_t get_u64(const json& j, const std::string& key) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        invalid(key, "expected a non-negative integer");
    }
    return j.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& key) {
    if (!j.is_string()) invalid(key, "expected a string");
    return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& key) {
    if (!j.is_boolean()) invalid(key, "expected true or false");
    return j.get<bool>();
}

void parse_swarm(const json& obj, SwarmConfig& s, std::set<std::string>& explicit_keys) {
    if (!obj.is_object()) invalid("swarm", "expected an object");
    for (const auto& [key, value] : obj.items()) {
        explicit_keys.insert(key);
        if (key == "c1") s.c1 = get_number(value, key);
        else if (key == "c2") s.c2 = get_number(value, key);
        else if (key == "n_iterations") s.n_iterations = get_int(value, key);
        else if (key == "n_particles") s.n_particles = get_int(value, key);
        else if (key == "w_start") s.w_start = get_number(value, key);
        else if (key == "w_end") s.w_end = get_number(value, key);
        else if (key == "w_f") s.w_f = get_number(value, key);
        else if (key == "m_max") s.m_max = get_number(value, key);
        else if (key == "m_min") s.m_min = get_number(value, key);
        else if (key == "v_max") s.v_max = get_number(value, key);
        else if (key == "v_min") s.v_min = get_number(value, key);
        else if (key == "init_mean") s.init_mean = get_number(value, key);
        else if (key == "init_std") s.init_std = get_number(value, key);
        else if (key == "inertia_mode") {
            const std::string mode = get_string(value, key);
            if (mode == "none") s.inertia_mode = InertiaMode::none;
            else if (mode == "adaptive") s.inertia_mode = InertiaMode::adaptive;
            else invalid(key, "expected \"none\" or \"adaptive\"");
        } else if (key == "inertia_decrement") {
            const std::string mode = get_string(value, key);
            if (mode == "corrected") s.inertia_decrement = InertiaDecrement::corrected;
            else if (mode == "literal") s.inertia_decrement = InertiaDecrement::literal;
            else invalid(key, "expected \"corrected\" or \"literal\"");
        } else if (key == "objective") {
            try {
                s.objective_kind = parse_objective_kind(get_string(value, key));
            } catch (const std::invalid_argument&) {
                invalid(key, "expected \"AIC\" or \"SSE\"");
            }
        } else {
            invalid("swarm." + key, "unknown key");
        }
    }
}

void validate_experiment(const ExperimentConfig& config) {
    config.swarm.validate();
    if (config.swarm.n_particles != static_cast<int>(model_catalog().size())) {
        invalid("n_particles", "must equal the number of catalog models (8)");
    }
    if (!(config.swarm.m_min > 0.0)) invalid("m_min", "moduli must stay positive");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& ex) {
        throw ConfigParseError(std::string("config is not valid JSON: ") + ex.what(), "");
    }
    if (!doc.is_object()) throw ConfigParseError("config must be a JSON object", "");

    ExperimentConfig config;
    std::set<std::string> swarm_keys;
    if (doc.contains("preset")) {
        config.preset = get_int(doc["preset"], "preset");
        apply_preset(config.swarm, *config.preset);
    }
    for (const auto& [key, value] : doc.items()) {
        if (key == "preset") continue;
        if (key == "swarm") parse_swarm(value, config.swarm, swarm_keys);
        else if (key == "seed") config.swarm.seed = get_u64(value, key);
        else if (key == "output_dir") config.output_dir = get_string(value, key);
        else if (key == "emit_mode_shapes") config.emit_mode_shapes = get_bool(value, key);
        else if (key == "execution") {
            const std::string mode = get_string(value, key);
            if (mode == "serial") config.execution = Execution::serial;
            else if (mode == "parallel") config.execution = Execution::parallel;
            else invalid(key, "expected \"serial\" or \"parallel\"");
        } else {
            invalid(key, "unknown key");
        }
    }

    // An explicit inertia mode or objective must agree with the preset.
    if (config.preset) {
        SwarmConfig expected;
        apply_preset(expected, *config.preset);
        if (swarm_keys.contains("inertia_mode") &&
            expected.inertia_mode != config.swarm.inertia_mode) {
            invalid("inertia_mode", "conflicts with preset " + std::to_string(*config.preset));
        }
        if (swarm_keys.contains("objective") &&
            expected.objective_kind != config.swarm.objective_kind) {
            invalid("objective", "conflicts with preset " + std::to_string(*config.preset));
        }
    }
    validate_experiment(config);
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigFileError("cannot open config file " + path.string(), "");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

// ---------------------------------------------------------------------------
// Experiment

std::vector<RankingEntry> rank_models(const SwarmRecord& record) {
    const auto& catalog = model_catalog();
    std::vector<RankingEntry> out;
    const auto& particles = record.final_state.particles;
    for (std::size_t i = 0; i < particles.size() && i < catalog.size(); ++i) {
        out.push_back({catalog[i].model_id, catalog[i].d(), particles[i].pbest_fitness,
                       particles[i].pbest_position});
    }
    std::sort(out.begin(), out.end(), [](const RankingEntry& a, const RankingEntry& b) {
        if (a.fitness != b.fitness) return a.fitness < b.fitness;
        if (a.d != b.d) return a.d < b.d;
        return a.model_id < b.model_id;
    });
    return out;
}

RunRecord execute_experiment(const ExperimentConfig& config) {
    validate_experiment(config);
    const auto& catalog = model_catalog();
    std::vector<std::size_t> dims;
    for (const ModelSpec& m : catalog) dims.push_back(m.d());

    const HBeamModel& model = shared_model();
    const ObjectiveKind kind = config.swarm.objective_kind;
    const FitnessFn fitness = [&](std::size_t index, const ParameterVector& position) {
        return model.evaluate(catalog[index], position, kind).value;
    };

    RunRecord record;
    record.config = config;
    record.swarm = run(config.swarm, dims, fitness, config.execution);
    record.ranking = rank_models(record.swarm);
    return record;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

RunRecord run_experiment(const ExperimentConfig& config) {
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw IoError("cannot create " + config.output_dir.string() + ": " + ec.message());

    RunRecord record = execute_experiment(config);
    write_file(config.output_dir / "convergence.csv", convergence_csv(record));
    write_file(config.output_dir / "result.json", result_json(record));
    if (config.emit_mode_shapes) {
        const ModelSpec& best = model_by_id(record.gbest_model_id());
        const ModalResult modal =
            shared_model().modal(best, record.swarm.final_state.gbest_position, true);
        write_file(config.output_dir / "mode_shapes.csv", mode_shapes_csv(modal));
    }
    return record;
}

// ---------------------------------------------------------------------------
// Serialization

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string convergence_csv(const RunRecord& record) {
    const std::size_t models = model_catalog().size();
    std::string out = "iteration,w,gbest_model,gbest_fitness";
    for (std::size_t i = 1; i <= models; ++i) out += ",fit_m" + std::to_string(i);
    for (std::size_t i = 1; i <= models; ++i) {
        for (std::size_t k = 1; k <= kMaxParameters; ++k) {
            out += ",pos_m" + std::to_string(i) + "_" + std::to_string(k);
        }
    }
    out += '\n';
    for (const IterationRow& row : record.swarm.rows) {
        out += std::to_string(row.iteration);
        out += ',' + format_number(row.w);
        out += ',' + std::to_string(row.gbest_index + 1);
        out += ',' + format_number(row.gbest_fitness);
        for (double f : row.fitness) out += ',' + format_number(f);
        for (const ParameterVector& p : row.positions) {
            for (double x : p) out += ',' + format_number(x);
        }
        out += '\n';
    }
    return out;
}

namespace {

json swarm_to_json(const SwarmConfig& s) {
    return json{
        {"c1", s.c1},
        {"c2", s.c2},
        {"n_iterations", s.n_iterations},
        {"n_particles", s.n_particles},
        {"w_start", s.w_start},
        {"w_end", s.w_end},
        {"w_f", s.w_f},
        {"inertia_mode", std::string(to_string(s.inertia_mode))},
        {"inertia_decrement", std::string(to_string(s.inertia_decrement))},
        {"m_max", s.m_max},
        {"m_min", s.m_min},
        {"v_max", s.v_max},
        {"v_min", s.v_min},
        {"init_mean", s.init_mean},
        {"init_std", s.init_std},
        {"objective", std::string(to_string(s.objective_kind))},
    };
}

json config_to_json(const ExperimentConfig& config) {
    json j{
        {"swarm", swarm_to_json(config.swarm)},
        {"seed", config.swarm.seed},
        {"output_dir", config.output_dir.generic_string()},
        {"emit_mode_shapes", config.emit_mode_shapes},
    };
    if (config.preset) j["preset"] = *config.preset;
    return j;
}

}  // namespace

std::string config_json(const ExperimentConfig& config) {
    return config_to_json(config).dump(2) + "\n";
}

std::string result_json(const RunRecord& record) {
    json ranking = json::array();
    for (const RankingEntry& e : record.ranking) {
        ranking.push_back({{"model_id", e.model_id},
                           {"d", e.d},
                           {"fitness", e.fitness},
                           {"position", e.position}});
    }
    json failures = json::array();
    for (const EvaluationFailure& f : record.swarm.failures) {
        failures.push_back({{"iteration", f.iteration},
                            {"model_id", f.particle + 1},
                            {"reason", f.reason}});
    }
    json doc{
        {"config", config_to_json(record.config)},
        {"seed", record.swarm.seed},
        {"converged_at", record.swarm.converged_at},
        {"gbest_model", record.gbest_model_id()},
        {"gbest_fitness", record.swarm.final_state.gbest_fitness},
        {"initial_gbest_model", record.swarm.initial_gbest_index + 1},
        {"initial_gbest_fitness", record.swarm.initial_gbest_fitness},
        {"ranking", ranking},
        {"failures", failures},
    };
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Inspection dumps

std::string describe_geometry() {
    const BeamGeometry g = build_h_beam_geometry();
    json nodes = json::array();
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        nodes.push_back({{"index", i}, {"xyz", {g.nodes[i].x(), g.nodes[i].y(), g.nodes[i].z()}}});
    }
    json elements = json::array();
    for (const BeamElementDef& e : g.elements) {
        json frame = json::array();
        for (int r = 0; r < 3; ++r) frame.push_back({e.frame(r, 0), e.frame(r, 1), e.frame(r, 2)});
        elements.push_back({{"id", e.id},
                            {"nodes", {e.node_a, e.node_b}},
                            {"length", e.length(g.nodes)},
                            {"frame", frame}});
    }
    json groupings = json::array();
    for (const ModelSpec& m : model_catalog()) {
        groupings.push_back({{"model_id", m.model_id}, {"d", m.d()}, {"groups", m.groups}});
    }
    const CrossSection s = nominal_section();
    const Material mat = nominal_material();
    json doc{
        {"nodes", nodes},
        {"elements", elements},
        {"joints", {g.left_joint, g.right_joint}},
        {"dof_count", g.dof_count()},
        {"section", {{"width", s.width}, {"thickness", s.thickness}, {"area", s.area},
                     {"iy", s.iy}, {"iz", s.iz}, {"torsion_constant", s.torsion_constant}}},
        {"material", {{"youngs_modulus_mean", mat.youngs_modulus_mean},
                      {"density", mat.density}, {"poisson_ratio", mat.poisson_ratio}}},
        {"models", groupings},
    };
    return doc.dump(2) + "\n";
}

std::string describe_catalog() {
    std::string out = "model,d,groups\n";
    for (const ModelSpec& m : model_catalog()) {
        out += "m" + std::to_string(m.model_id) + ',' + std::to_string(m.d()) + ',';
        for (std::size_t j = 0; j < m.groups.size(); ++j) {
            if (j > 0) out += ' ';
            out += '{';
            for (std::size_t k = 0; k < m.groups[j].size(); ++k) {
                if (k > 0) out += ';';
                out += std::to_string(m.groups[j][k]);
            }
            out += '}';
        }
        out += '\n';
    }
    return out;
}

std::string describe_modal(int model_id, const ParameterVector& position) {
    const ModalResult result = shared_model().modal(model_by_id(model_id), position);
    std::string out = "rank,frequency_hz,rigid_body_flag\n";
    for (std::size_t i = 0; i < result.frequencies_hz.size(); ++i) {
        out += std::to_string(i + 1) + ',' + format_number(result.frequencies_hz[i]) + ',' +
               (i < result.rigid_body_count ? "1" : "0") + '\n';
    }
    return out;
}

std::string matrix_csv(const Eigen::MatrixXd& matrix) {
    std::string out;
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            if (j > 0) out += ',';
            out += format_number(matrix(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string mode_shapes_csv(const ModalResult& result) {
    std::string out = "rank,frequency_hz,rigid_body_flag";
    const Eigen::Index dofs = result.mode_shapes ? result.mode_shapes->rows() : 0;
    for (Eigen::Index k = 0; k < dofs; ++k) out += ",dof_" + std::to_string(k + 1);
    out += '\n';
    for (std::size_t i = 0; i < result.frequencies_hz.size(); ++i) {
        out += std::to_string(i + 1) + ',' + format_number(result.frequencies_hz[i]) + ',' +
               (i < result.rigid_body_count ? "1" : "0");
        for (Eigen::Index k = 0; k < dofs; ++k) {
            out += ',' + format_number((*result.mode_shapes)(k, static_cast<Eigen::Index>(i)));
        }
        out += '\n';
    }
    return out;
}

}  // namespace femsel
