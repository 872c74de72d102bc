// Command-line front end: run experiments, the four simulation presets, and
// inspection dumps of the H-beam model.

#include "femsel/errors.hpp"
#include "femsel/runner.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

femsel::ParameterVector parse_position(const std::string& text, const femsel::ModelSpec& model) {
    if (text.empty()) return femsel::nominal_position(model);
    femsel::ParameterVector p{};
    std::stringstream in(text);
    std::string item;
    std::size_t k = 0;
    while (std::getline(in, item, ',')) {
        if (k >= p.size()) throw femsel::ConfigValidationError("position: more than 5 values", "position");
        try {
            p[k++] = std::stod(item);
        } catch (const std::exception&) {
            throw femsel::ConfigValidationError("position: '" + item + "' is not a number", "position");
        }
    }
    if (k < model.d()) {
        throw femsel::ConfigValidationError(
            "position: model m" + std::to_string(model.model_id) + " needs " +
                std::to_string(model.d()) + " values",
            "position");
    }
    return p;
}

femsel::Execution parse_execution(const std::string& text) {
    return text == "serial" ? femsel::Execution::serial : femsel::Execution::parallel;
}

void print_summary(const femsel::RunRecord& record) {
    std::cout << "gbest model m" << record.gbest_model_id() << " fitness "
              << femsel::format_number(record.swarm.final_state.gbest_fitness)
              << " converged_at " << record.converged_at() << "\nranking:";
    for (const auto& e : record.ranking) std::cout << " m" << e.model_id;
    std::cout << "\nwrote " << (record.config.output_dir / "convergence.csv").string() << " and "
              << (record.config.output_dir / "result.json").string() << "\n";
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw femsel::IoError("cannot write " + path);
    out << content;
    if (!out) throw femsel::IoError("write failed for " + path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite element model selection by particle swarm optimization"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::string execution = "parallel";
    auto* run_cmd = app.add_subcommand("run", "Run an experiment from a JSON config file");
    run_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();
    auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the config seed");
    auto* out_opt = run_cmd->add_option("--out", out_dir, "Override the output directory");
    run_cmd->add_option("--execution", execution, "Fitness evaluation schedule")
        ->check(CLI::IsMember({"serial", "parallel"}));

    int simulation = 0;
    std::uint64_t preset_seed = 0;
    std::string preset_out;
    bool preset_shapes = false;
    auto* preset_cmd = app.add_subcommand("preset", "Run one of the four simulation presets");
    preset_cmd->add_option("--simulation", simulation, "Preset number")
        ->required()
        ->check(CLI::Range(1, 4));
    preset_cmd->add_option("--seed", preset_seed, "RNG seed")->required();
    preset_cmd->add_option("--out", preset_out, "Output directory")->required();
    preset_cmd->add_option("--execution", execution, "Fitness evaluation schedule")
        ->check(CLI::IsMember({"serial", "parallel"}));
    preset_cmd->add_flag("--mode-shapes", preset_shapes, "Also write mode_shapes.csv");

    std::string what;
    int model_id = 1;
    std::string position_text;
    std::string matrix_out = ".";
    auto* describe_cmd = app.add_subcommand("describe", "Dump geometry, catalog, modal table or matrices");
    describe_cmd->add_option("what", what, "geometry | catalog | modal | matrices")
        ->required()
        ->check(CLI::IsMember({"geometry", "catalog", "modal", "matrices"}));
    describe_cmd->add_option("--model", model_id, "Model id 1..8 (modal, matrices)");
    describe_cmd->add_option("--position", position_text,
                             "Comma-separated moduli in Pa; defaults to the nominal modulus");
    describe_cmd->add_option("--out", matrix_out, "Directory for k_global.csv and m_global.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run_cmd) {
            femsel::ExperimentConfig config = femsel::load_config(config_path);
            if (*seed_opt) config.swarm.seed = seed;
            if (*out_opt) config.output_dir = out_dir;
            if (run_cmd->count("--execution") > 0) config.execution = parse_execution(execution);
            print_summary(femsel::run_experiment(config));
        } else if (*preset_cmd) {
            femsel::ExperimentConfig config =
                femsel::preset_config(simulation, preset_seed, preset_out);
            config.execution = parse_execution(execution);
            config.emit_mode_shapes = preset_shapes;
            print_summary(femsel::run_experiment(config));
        } else if (*describe_cmd) {
            if (what == "geometry") {
                std::cout << femsel::describe_geometry();
            } else if (what == "catalog") {
                std::cout << femsel::describe_catalog();
            } else {
                const femsel::ModelSpec* model = nullptr;
                try {
                    model = &femsel::model_by_id(model_id);
                } catch (const std::out_of_range& ex) {
                    throw femsel::ConfigValidationError(ex.what(), "model");
                }
                const auto position = parse_position(position_text, *model);
                if (what == "modal") {
                    std::cout << femsel::describe_modal(model_id, position);
                } else {
                    const femsel::HBeamModel beam;
                    const auto system = beam.system(*model, position);
                    write_text(matrix_out + "/k_global.csv", femsel::matrix_csv(system.k_global));
                    write_text(matrix_out + "/m_global.csv", femsel::matrix_csv(system.m_global));
                    std::cout << "wrote " << matrix_out << "/k_global.csv and " << matrix_out
                              << "/m_global.csv\n";
                }
            }
        }
    } catch (const femsel::ConfigError& ex) {
        std::cerr << "configuration error: " << ex.what() << "\n";
        return kExitConfig;
    } catch (const femsel::IoError& ex) {
        std::cerr << "I/O error: " << ex.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "configuration error: " << ex.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& ex) {
        std::cerr << "numerical failure: " << ex.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
