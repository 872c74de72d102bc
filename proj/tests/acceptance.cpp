// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include "femsel/runner.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace femsel;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int g_failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s -- %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

GlobalSystem h_beam(double modulus) {
    ModulusVector moduli;
    moduli.fill(modulus);
    return assemble(build_h_beam_geometry(), moduli, nominal_material(), nominal_section());
}

// ---------------------------------------------------------------------------

void criterion_1() {
    const auto start = Clock::now();
    const Material mat = nominal_material();
    const CrossSection s = nominal_section();
    const BeamGeometry beam = oracle::straight_beam(1.2, 12);
    ModulusVector moduli;
    moduli.fill(mat.youngs_modulus_mean);
    const GlobalSystem sys = assemble(beam, moduli, mat, s);
    const ModalResult modal = natural_frequencies(sys, {}, true);

    // Weak-axis (in-plane) bending family, identified from the mode shapes.
    std::vector<double> bending;
    for (std::size_t i = modal.rigid_body_count; i < modal.frequencies_hz.size() && bending.size() < 3; ++i) {
        const Eigen::VectorXd phi = modal.mode_shapes->col(static_cast<Eigen::Index>(i));
        if (oracle::in_plane_bending_fraction(phi, sys.m_global) > 0.9) bending.push_back(modal.frequencies_hz[i]);
    }
    const auto exact = oracle::free_free_bending_hz(mat.youngs_modulus_mean, s.iz, mat.density, s.area, 1.2);
    double worst = bending.size() == 3 ? 0.0 : 1.0;
    std::string detail;
    for (std::size_t i = 0; i < bending.size(); ++i) {
        const double rel = std::abs(bending[i] - exact[i]) / exact[i];
        worst = std::max(worst, rel);
        detail += fmt("f%zu %.3f vs %.3f Hz (%.3f%%); ", i + 1, bending[i], exact[i], 100 * rel);
    }
    const double t = seconds_since(start);
    detail += fmt("runtime %.3f s", t);
    report(1, "FE kernel vs free-free Euler-Bernoulli closed form (1%)", worst <= 0.01 && t < 1.0, detail);
}

void criterion_2() {
    const GlobalSystem sys = h_beam(7.2e10);
    const EigenPairs pairs = solve_generalized_eigen(sys, {}, false);
    const std::size_t rigid = count_rigid_modes(pairs.values);
    double worst = 0.0;
    const double k_norm = sys.k_global.norm();
    for (const auto& phi : oracle::rigid_body_vectors(build_h_beam_geometry())) {
        worst = std::max(worst, (sys.k_global * phi).norm() / (k_norm * phi.norm()));
    }
    report(2, "six rigid-body modes at nominal E", rigid == 6 && worst <= 1e-8,
           fmt("%zu eigenvalues below 1e-6 x lambda7 (lambda6 %.3e, lambda7 %.3e); max |K phi|/(|K||phi|) %.2e",
               rigid, pairs.values[5], pairs.values[6], worst));
}

void criterion_3() {
    const ModalResult base = natural_frequencies(h_beam(7.2e10));
    const ModalResult scaled = natural_frequencies(h_beam(4.0 * 7.2e10));
    double worst = 0.0;
    for (std::size_t i = 6; i < base.frequencies_hz.size(); ++i) {
        worst = std::max(worst, std::abs(scaled.frequencies_hz[i] - 2.0 * base.frequencies_hz[i]) /
                                    (2.0 * base.frequencies_hz[i]));
    }
    report(3, "moduli x4 doubles every elastic frequency (1e-9)", worst <= 1e-9,
           fmt("max relative deviation %.2e over %zu elastic modes", worst, base.frequencies_hz.size() - 6));
}

void criterion_4() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> r(-60.0, 60.0);
    double worst_identity = 0.0;
    double worst_step = 0.0;
    int same_binade_checked = 0;
    int same_binade_exact = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Residuals res;
        for (double& x : res) x = r(rng);
        const double s = sse(res).value;
        for (std::size_t d = 1; d <= 5; ++d) {
            const ObjectiveValue a = aic(res, d);
            if (a.sigma_squared <= kSigmaSquaredFloor) continue;
            const double via = 5.0 * std::log(2.0 * s / 5.0) + 2.0 * static_cast<double>(d);
            worst_identity = std::max(worst_identity, std::abs(a.value - via) / std::max(std::abs(via), 1e-300));
            if (d == 5) continue;
            const double next = aic(res, d + 1).value;
            const double top = std::max(std::abs(next), std::abs(a.value));
            const double ulp = std::nextafter(top, std::numeric_limits<double>::infinity()) - top;
            worst_step = std::max(worst_step, std::abs((next - a.value) - 2.0) / ulp);
            if (std::ilogb(next) == std::ilogb(a.value) && (next > 0) == (a.value > 0)) {
                ++same_binade_checked;
                if (next - a.value == 2.0) ++same_binade_exact;
            }
        }
    }
    const bool ok = worst_identity <= 1e-12 && worst_step <= 2.0 && same_binade_exact == same_binade_checked;
    report(4, "AIC/SSE identity (1e-12) and AIC(d+1)-AIC(d) = 2", ok,
           fmt("max identity error %.2e; penalty step exact in %d/%d same-binade pairs, max %.1f ulp overall",
               worst_identity, same_binade_exact, same_binade_checked, worst_step));
}

void criterion_5() {
    const auto start = Clock::now();
    const HBeamModel model;
    const auto fem = model.selected_frequencies(model_by_id(1), nominal_position(model_by_id(1)));
    const double t = seconds_since(start);
    const MeasuredData measured = measured_h_beam();
    bool ok = t < 1.0;
    std::string detail;
    for (std::size_t i = 0; i < 5; ++i) {
        const double rel = (fem[i] - measured.frequencies_hz[i]) / measured.frequencies_hz[i];
        ok = ok && std::abs(rel) <= 0.20;
        detail += fmt("mode %zu: %.1f vs %.1f Hz (%+.1f%%); ", measured.mode_indices[i], fem[i],
                      measured.frequencies_hz[i], 100 * rel);
    }
    detail += fmt("solve %.3f s", t);
    report(5, "nominal frequencies within 20% of measured", ok, detail);
}

// ---------------------------------------------------------------------------
// Trace invariants, shared by criteria 6-8 and asserted under criterion 10.

struct InvariantTally {
    int traces = 0;
    int violations = 0;
    std::string first;

    void fail(const std::string& what) {
        if (violations++ == 0) first = what;
    }
};

InvariantTally g_invariants;

void check_trace(const std::string& label, const SwarmRecord& rec, const SwarmConfig& cfg,
                 const std::vector<std::size_t>& dims) {
    ++g_invariants.traces;
    double previous = rec.initial_gbest_fitness;
    for (const IterationRow& row : rec.rows) {
        if (row.gbest_fitness > previous) g_invariants.fail(label + ": gbest increased");
        previous = row.gbest_fitness;
        const double min_pbest = *std::min_element(row.pbest_fitness.begin(), row.pbest_fitness.end());
        if (row.gbest_fitness != min_pbest) g_invariants.fail(label + ": gbest != min pbest");
        for (std::size_t i = 0; i < row.positions.size(); ++i) {
            for (std::size_t k = 0; k < kMaxParameters; ++k) {
                const double m = row.positions[i][k];
                const double v = std::abs(row.velocities[i][k]);
                if (k < dims[i] && (m < cfg.m_min || m > cfg.m_max)) g_invariants.fail(label + ": position out of bounds");
                if (v < cfg.v_min || v > cfg.v_max) g_invariants.fail(label + ": velocity magnitude out of bounds");
            }
        }
    }
}

void check_inactive_independence(const std::string& label, const RunRecord& rec) {
    const auto& catalog = model_catalog();
    const IterationRow& last = rec.swarm.rows.back();
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        ParameterVector zeroed = last.positions[i];
        for (std::size_t k = catalog[i].d(); k < kMaxParameters; ++k) zeroed[k] = 0.0;
        const double v = evaluate_model(catalog[i], zeroed, rec.config.swarm.objective_kind).value;
        if (v != last.fitness[i]) g_invariants.fail(label + ": inactive dimensions changed fitness");
    }
}

// ---------------------------------------------------------------------------

void criterion_6() {
    int passed = 0;
    double slowest = 0.0;
    std::string detail;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SwarmConfig c;  // published c1, c2, N, w schedule; adaptive inertia
        c.m_min = -5.12;
        c.m_max = 5.12;
        c.v_max = 10.24;
        c.v_min = 1e-12;
        c.init_mean = 0.0;
        c.init_std = 2.56;
        c.seed = seed;
        const std::vector<std::size_t> dims(8, 5);
        const FitnessFn sphere = [](std::size_t, const ParameterVector& x) {
            double s = 0.0;
            for (double v : x) s += v * v;
            return s;
        };
        const auto start = Clock::now();
        const SwarmRecord rec = run(c, dims, sphere, Execution::serial);
        slowest = std::max(slowest, seconds_since(start));
        const double ratio = rec.final_state.gbest_fitness / rec.initial_gbest_fitness;
        if (ratio <= 1e-3) ++passed;
        check_trace("sphere seed " + std::to_string(seed), rec, c, dims);
        if (seed <= 3) detail += fmt("seed %llu ratio %.1e; ", static_cast<unsigned long long>(seed), ratio);
    }
    detail += fmt("%d/10 seeds reached 1e-3; slowest run %.3f s", passed, slowest);
    report(6, "sphere sanity: gbest <= 1e-3 x initial in 10/10 seeds", passed == 10 && slowest < 1.0, detail);
}

struct PresetSweep {
    std::vector<RunRecord> records;
    double slowest = 0.0;
};

PresetSweep sweep(int preset) {
    PresetSweep out;
    std::vector<std::size_t> dims;
    for (const auto& m : model_catalog()) dims.push_back(m.d());
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto start = Clock::now();
        RunRecord rec = execute_experiment(preset_config(preset, seed, "unused"));
        out.slowest = std::max(out.slowest, seconds_since(start));
        const std::string label = "preset " + std::to_string(preset) + " seed " + std::to_string(seed);
        check_trace(label, rec.swarm, rec.config.swarm, dims);
        check_inactive_independence(label, rec);
        std::printf("    %s: gbest m%d fitness %.4f converged_at %d ranking", label.c_str(),
                    rec.gbest_model_id(), rec.swarm.final_state.gbest_fitness, rec.converged_at());
        for (const auto& e : rec.ranking) std::printf(" m%d", e.model_id);
        std::printf("\n");
        std::fflush(stdout);
        out.records.push_back(std::move(rec));
    }
    return out;
}

// Best AIC of the single-parameter model over a fine scan of its bounds.
double single_parameter_aic_optimum(double& best_modulus) {
    const SwarmConfig c;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 400; ++i) {
        const double e = c.m_min + (c.m_max - c.m_min) * i / 400.0;
        const double v = evaluate_model(model_by_id(1), {e, 0, 0, 0, 0}, ObjectiveKind::aic).value;
        if (v < best) {
            best = v;
            best_modulus = e;
        }
    }
    return best;
}

void criteria_7_and_8() {
    const PresetSweep p1 = sweep(1);
    const PresetSweep p3 = sweep(3);

    int m1_wins = 0;
    double best_other = std::numeric_limits<double>::infinity();
    int best_other_id = 0;
    for (const RunRecord& r : p1.records) {
        if (r.gbest_model_id() == 1) ++m1_wins;
        for (const auto& e : r.ranking) {
            if (e.model_id != 1 && e.fitness < best_other) {
                best_other = e.fitness;
                best_other_id = e.model_id;
            }
        }
    }
    int simple_first = 0;
    int converged = 0;
    for (const RunRecord& r : p3.records) {
        if (r.ranking.front().d <= 2) ++simple_first;
        if (r.converged_at() < 500) ++converged;
    }
    double m1_modulus = 0.0;
    const double m1_optimum = single_parameter_aic_optimum(m1_modulus);
    const double slowest = std::max(p1.slowest, p3.slowest);
    const bool ok = 2 * m1_wins > 10 && 2 * simple_first > 10 && slowest < 120.0;
    report(7, "selection: preset 1 picks m1, preset 3 ranks a d <= 2 model first (strict majority)", ok,
           fmt("preset 1: m1 final gbest in %d/10; preset 3: d <= 2 first in %d/10; slowest run %.1f s; "
               "m1 AIC optimum over a 401-point scan %.4f at E = %.4g Pa, best other model found m%d at %.4f",
               m1_wins, simple_first, slowest, m1_optimum, m1_modulus, best_other_id, best_other));
    report(8, "preset 3 converged_at < 500 in >= 8/10 seeds", converged >= 8,
           fmt("%d/10 seeds", converged));
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void criterion_9() {
    const fs::path dir = fs::temp_directory_path() / "femsel_acceptance_determinism";
    fs::remove_all(dir);
    const ExperimentConfig config = preset_config(3, 2024, dir);
    run_experiment(config);
    const std::string csv1 = read_file(dir / "convergence.csv");
    const std::string json1 = read_file(dir / "result.json");
    run_experiment(config);
    const std::string csv2 = read_file(dir / "convergence.csv");
    const std::string json2 = read_file(dir / "result.json");
    const bool ok = !csv1.empty() && !json1.empty() && csv1 == csv2 && json1 == json2;
    report(9, "identical config and seed give byte-identical outputs", ok,
           fmt("convergence.csv %zu bytes %s, result.json %zu bytes %s", csv1.size(),
               csv1 == csv2 ? "identical" : "DIFFERENT", json1.size(), json1 == json2 ? "identical" : "DIFFERENT"));
}

void criterion_10() {
    report(10, "trace invariants on every trace of criteria 6-8", g_invariants.traces == 30 && g_invariants.violations == 0,
           fmt("%d traces checked, %d violations%s%s", g_invariants.traces, g_invariants.violations,
               g_invariants.violations ? "; first: " : "", g_invariants.first.c_str()));
}

}  // namespace

int main() {
    const auto start = Clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criteria_7_and_8();
    criterion_9();
    criterion_10();
    std::printf("acceptance: %d criterion failure(s), %.1f s\n", g_failures, seconds_since(start));
    return g_failures == 0 ? 0 : 1;
}
