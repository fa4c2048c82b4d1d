#include "qvmc/runner.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qvmc/bounds.hpp"
#include "qvmc/rng.hpp"
#include "qvmc/state.hpp"

namespace qvmc {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676655900577;

using ordered_json = nlohmann::ordered_json;

double elapsed_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// "# config: {...}\n# seed: N\n" — prepended to every CSV so a run can be
// reproduced from any one of its output files.
std::string header_block(const ExperimentConfig& cfg) {
    return "# config: " + config_json(cfg) + "\n# seed: " + std::to_string(cfg.seed) + "\n";
}

std::filesystem::path prepare_out_dir(const ExperimentConfig& cfg) {
    const std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw ConfigError("cannot create output directory '" + cfg.out_dir +
                          "': " + ec.message());
    save_config(cfg, (dir / "config.json").string());
    return dir;
}

void write_json_file(const ordered_json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

// Shared preamble fields so every JSON output is self-describing, mirroring
// the CSV comment block.
ordered_json json_preamble(const ExperimentConfig& cfg) {
    ordered_json j;
    j["experiment"] = cfg.experiment;
    j["seed"] = cfg.seed;
    j["config"] = ordered_json::parse(config_json(cfg));
    return j;
}

std::vector<double> grid_energies(const AnsatzSpec& spec, const PauliSum& h, int resolution) {
    if (resolution < 2) throw ConfigError("landscape grid resolution must be at least 2");
    const double step = kTwoPi / resolution;
    const std::size_t res = static_cast<std::size_t>(resolution);
    std::vector<double> energies(res * res);
#pragma omp parallel for schedule(dynamic) if (resolution > 1)
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; j < resolution; ++j) {
            const StateVec phi = prepare_simplified(spec, i * step, j * step);
            energies[res * static_cast<std::size_t>(i) + static_cast<std::size_t>(j)] =
                std::real(matrix_element(phi, h, phi));
        }
    }
    return energies;
}

}  // namespace

ResolvedModel resolve_model(const ModelConfig& mc) {
    ResolvedModel out;
    try {
        out.graph = mc.graph_file.empty() ? make_graph(mc.n_vertices, mc.edges)
                                          : load_graph(mc.graph_file);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
    PauliSum h = heisenberg(out.graph, mc.coupling);
    if (mc.normalize) {
        auto [normalized, scale] = normalize_spectral(h);
        out.hamiltonian = std::move(normalized);
        out.scale = scale;
    } else {
        out.hamiltonian = std::move(h);
    }
    return out;
}

AnsatzSpec resolve_ansatz(const AnsatzConfig& ac, const ResolvedModel& model) {
    AnsatzSpec spec;
    spec.kind = ac.kind == "full" ? AnsatzKind::full_ha : AnsatzKind::simplified_ha;
    spec.graph = model.graph;
    if (spec.kind == AnsatzKind::full_ha) spec.terms = model.hamiltonian;
    spec.n_trotter = ac.trotter_steps;
    spec.init = ac.init == "zero" ? InitState::all_zero : InitState::pairwise_singlet;
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("ansatz: ") + e.what());
    }
    return spec;
}

PriorGuiding resolve_prior(const PriorConfig& pc, std::size_t n_params, std::uint64_t seed) {
    if (pc.kind == "constant") return constant_prior();
    if (pc.kind == "delta-grid")
        return uniform_grid_prior(n_params, pc.points, pc.box_min, pc.box_max, seed);
    PriorGuiding prior;
    prior.kind = PriorGuiding::Kind::evolution_series;
    prior.k_max = pc.k_max;
    return prior;
}

LossConfig resolve_loss(const LossSettings& ls, const std::string& mode,
                        std::uint64_t estimator_seed) {
    LossConfig lc;
    lc.kind = ls.kind == "raw"           ? LossKind::raw
              : ls.kind == "regularized" ? LossKind::regularized
                                         : LossKind::barrier;
    const bool shots = mode == "shots";
    lc.evaluation = shots ? LossConfig::Evaluation::sampled : LossConfig::Evaluation::deterministic;
    lc.barrier_x = ls.barrier_x;
    lc.barrier_y = ls.barrier_y;
    lc.barrier_z = ls.barrier_z;
    lc.kappa = ls.kappa;
    lc.estimator.M = ls.estimator.pair_samples;
    lc.estimator.M_Q = ls.estimator.shots_per_test;
    lc.estimator.mode = shots ? EstimatorMode::shot_noise : EstimatorMode::exact;
    lc.estimator.protocol = ls.estimator.protocol == "real-part"
                                ? MeasureProtocol::real_part_only
                                : ls.estimator.protocol == "two-part" ? MeasureProtocol::two_part
                                                                      : MeasureProtocol::auto_select;
    lc.estimator.seed = estimator_seed;
    return lc;
}

GridMinimum landscape_grid_min(const AnsatzSpec& spec, const PauliSum& h, int resolution) {
    if (spec.kind != AnsatzKind::simplified_ha)
        throw ConfigError("deterministic grid search needs the simplified ansatz");
    const std::vector<double> energies = grid_energies(spec, h, resolution);
    const double step = kTwoPi / resolution;
    std::size_t best = 0;
    for (std::size_t idx = 1; idx < energies.size(); ++idx)
        if (energies[idx] < energies[best]) best = idx;
    const std::size_t res = static_cast<std::size_t>(resolution);
    return {energies[best], static_cast<double>(best / res) * step,
            static_cast<double>(best % res) * step};
}

RunResult run_landscape(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const ResolvedModel model = resolve_model(cfg.model);
    const AnsatzSpec spec = resolve_ansatz(cfg.ansatz, model);
    if (spec.kind != AnsatzKind::simplified_ha)
        throw ConfigError("landscape requires the simplified ansatz");
    const std::filesystem::path dir = prepare_out_dir(cfg);

    const int res = cfg.landscape.resolution;
    const double step = kTwoPi / res;
    const std::vector<double> energies = grid_energies(spec, model.hamiltonian, res);

    {
        std::ofstream out(dir / "grid.csv");
        if (!out) throw std::runtime_error("cannot open grid file");
        out << header_block(cfg) << "theta-xy,theta-z,energy\n";
        char buf[128];
        for (int i = 0; i < res; ++i)
            for (int j = 0; j < res; ++j) {
                std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", i * step, j * step,
                              energies[static_cast<std::size_t>(i) * res + j]);
                out << buf;
            }
        if (!out) throw std::runtime_error("failed writing grid file");
    }

    // Plain gradient descent from each configured start, central differences;
    // the trajectories overlay the heat map the way the energy-landscape
    // figure draws its optimization paths.
    const auto energy_at = [&](double xy, double z) {
        const StateVec phi = prepare_simplified(spec, xy, z);
        return std::real(matrix_element(phi, model.hamiltonian, phi));
    };
    {
        std::ofstream out(dir / "trajectories.csv");
        if (!out) throw std::runtime_error("cannot open trajectories file");
        out << header_block(cfg) << "start,step,theta-xy,theta-z,energy\n";
        char buf[160];
        constexpr double kDiffStep = 1e-4;
        for (std::size_t s = 0; s < cfg.landscape.starts.size(); ++s) {
            double xy = cfg.landscape.starts[s].first;
            double z = cfg.landscape.starts[s].second;
            for (int it = 0; it <= cfg.landscape.descent_steps; ++it) {
                std::snprintf(buf, sizeof(buf), "%zu,%d,%.17g,%.17g,%.17g\n", s, it, xy, z,
                              energy_at(xy, z));
                out << buf;
                if (it == cfg.landscape.descent_steps) break;
                const double gx =
                    (energy_at(xy + kDiffStep, z) - energy_at(xy - kDiffStep, z)) / (2 * kDiffStep);
                const double gz =
                    (energy_at(xy, z + kDiffStep) - energy_at(xy, z - kDiffStep)) / (2 * kDiffStep);
                xy -= cfg.landscape.descent_rate * gx;
                z -= cfg.landscape.descent_rate * gz;
            }
        }
        if (!out) throw std::runtime_error("failed writing trajectories file");
    }

    GridMinimum gm{energies[0], 0.0, 0.0};
    for (std::size_t idx = 1; idx < energies.size(); ++idx)
        if (energies[idx] < gm.energy) {
            gm.energy = energies[idx];
            gm.theta_xy = static_cast<double>(idx / static_cast<std::size_t>(res)) * step;
            gm.theta_z = static_cast<double>(idx % static_cast<std::size_t>(res)) * step;
        }

    ordered_json summary = json_preamble(cfg);
    summary["resolution"] = res;
    summary["grid-step"] = step;
    summary["min-energy"] = gm.energy;
    summary["min-theta-xy"] = gm.theta_xy;
    summary["min-theta-z"] = gm.theta_z;
    summary["spectral-scale"] = model.scale;
    if (spec.n_qubits() <= 12) {
        const SpectrumReport report = exact_spectrum(model.hamiltonian);
        summary["exact-ground-energy"] = report.ground_energy;
        summary["spectral-gap"] = report.gap;
    } else {
        summary["exact-ground-energy"] = nullptr;  // beyond the dense solver
    }
    summary["elapsed-seconds"] = elapsed_since(t0);
    write_json_file(summary, (dir / "summary.json").string());

    char msg[160];
    std::snprintf(msg, sizeof(msg), "landscape: %dx%d grid minimum %.6f at (%.4f, %.4f)", res,
                  res, gm.energy, gm.theta_xy, gm.theta_z);
    return {kExitOk, msg};
}

RunResult run_train(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const ResolvedModel model = resolve_model(cfg.model);
    const AnsatzSpec spec = resolve_ansatz(cfg.ansatz, model);
    const std::filesystem::path dir = prepare_out_dir(cfg);

    // Independent streams: 1 = network init, 2 = prior grid, 3 = estimator.
    const PriorGuiding prior =
        resolve_prior(cfg.guiding.prior, spec.n_params(), derive_seed(cfg.seed, 2));
    const GridLossEvaluator eval(spec, prior, model.hamiltonian);
    GuidingNet net(static_cast<int>(spec.n_params()), cfg.guiding.hidden,
                   w_choice_from_name(cfg.guiding.w_choice));
    net.init_random(derive_seed(cfg.seed, 1));
    const LossConfig loss = resolve_loss(cfg.loss, cfg.mode, derive_seed(cfg.seed, 3));

    const TrainResult result =
        two_stage_train(eval, std::move(net), loss, cfg.train.adam, cfg.train.budget);

    write_trace_csv(result.trace, (dir / "trace.csv").string(), header_block(cfg));
    save_train_checkpoint(result.net, prior, cfg.seed, result.adam,
                          (dir / "checkpoint.json").string());

    ordered_json summary = json_preamble(cfg);
    summary["stage1-crossed"] = result.stage1_crossed;
    summary["stage1-exit-iteration"] = result.stage1_iterations;
    summary["iterations"] = result.trace.rows.size();
    summary["monotone-ok"] = result.monotone_ok;
    summary["loss-fault"] = result.loss_fault;
    summary["final-loss"] = result.final_value.loss;
    summary["final-energy"] = result.final_value.energy;
    summary["final-norm"] = result.final_value.norm;
    summary["energy-shift"] = eval.energy_shift(loss);
    summary["elapsed-seconds"] = elapsed_since(t0);
    write_json_file(summary, (dir / "summary.json").string());

    if (result.loss_fault)
        return {kExitTrainingFailure, "train: loss evaluation fault, run stopped early"};
    if (!result.stage1_crossed) {
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "train: stage 1 failed to cross norm barrier x=%.3g within %llu iterations",
                      cfg.loss.barrier_x,
                      static_cast<unsigned long long>(cfg.train.budget.stage1_max));
        return {kExitTrainingFailure, msg};
    }
    char msg[200];
    std::snprintf(msg, sizeof(msg),
                  "train: stage 1 crossed at iteration %llu; final loss %.6f (energy %.6f, "
                  "norm %.4f)",
                  static_cast<unsigned long long>(result.stage1_iterations),
                  result.final_value.loss, result.final_value.energy, result.final_value.norm);
    return {kExitOk, msg};
}

RunResult run_sweep(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const ResolvedModel model = resolve_model(cfg.model);
    const AnsatzSpec spec = resolve_ansatz(cfg.ansatz, model);
    const std::filesystem::path dir = prepare_out_dir(cfg);

    const PriorGuiding prior =
        resolve_prior(cfg.guiding.prior, spec.n_params(), derive_seed(cfg.seed, 2));
    const GridLossEvaluator eval(spec, prior, model.hamiltonian);

    SweepSettings settings;
    settings.x_values = cfg.sweep.x_values;
    settings.repeats = cfg.sweep.repeats;
    settings.root_seed = cfg.seed;
    settings.loss = resolve_loss(cfg.loss, cfg.mode, derive_seed(cfg.seed, 3));
    settings.adam = cfg.train.adam;
    settings.budget = cfg.train.budget;
    settings.hidden = cfg.guiding.hidden;
    settings.w_choice = w_choice_from_name(cfg.guiding.w_choice);
    settings.init = cfg.sweep.init == "delta" ? SweepInit::delta_center : SweepInit::random_net;
    settings.delta_center = cfg.sweep.delta_center;
    settings.delta_tau = cfg.sweep.delta_tau;
    settings.jitter = cfg.sweep.jitter;

    const std::vector<SweepRow> rows = barrier_sweep(eval, settings);
    write_sweep_csv(rows, (dir / "sweep.csv").string(), header_block(cfg));

    std::size_t flagged = 0;
    for (const SweepRow& r : rows)
        if (!r.stage1_crossed || !std::isfinite(r.final_loss)) ++flagged;

    // Companion reference: the dashed line the sweep medians are plotted
    // against is the best energy the bare deterministic circuit reaches.
    ordered_json reference = json_preamble(cfg);
    if (spec.kind == AnsatzKind::simplified_ha) {
        const GridMinimum gm =
            landscape_grid_min(spec, model.hamiltonian, cfg.landscape.resolution);
        reference["reference-energy"] = gm.energy;
        reference["reference-theta-xy"] = gm.theta_xy;
        reference["reference-theta-z"] = gm.theta_z;
        reference["reference-resolution"] = cfg.landscape.resolution;
    } else {
        reference["reference-energy"] = nullptr;  // no 2-angle grid for the full ansatz
    }
    if (spec.n_qubits() <= 12)
        reference["exact-ground-energy"] = exact_spectrum(model.hamiltonian).ground_energy;
    reference["rows"] = rows.size();
    reference["flagged-rows"] = flagged;
    reference["elapsed-seconds"] = elapsed_since(t0);
    write_json_file(reference, (dir / "reference.json").string());

    char msg[160];
    std::snprintf(msg, sizeof(msg), "sweep: %zu rows (%zu flagged) over %zu barrier values",
                  rows.size(), flagged, cfg.sweep.x_values.size());
    return {kExitOk, msg};
}

RunResult run_verify(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::filesystem::path dir = prepare_out_dir(cfg);

    const std::vector<BoundReport> reports =
        default_verification_suite(cfg.verify.filter, cfg.seed);
    const bool ok = all_satisfied(reports);

    ordered_json doc = json_preamble(cfg);
    doc["filter"] = cfg.verify.filter;
    doc["all-satisfied"] = ok;
    doc["reports"] = ordered_json::parse(bound_reports_json(reports));
    doc["elapsed-seconds"] = elapsed_since(t0);
    write_json_file(doc, (dir / "bounds.json").string());

    if (ok) {
        char msg[120];
        std::snprintf(msg, sizeof(msg), "verify: %zu checks satisfied", reports.size());
        return {kExitOk, msg};
    }
    std::string names;
    for (const BoundReport& r : reports)
        if (!r.satisfied) names += (names.empty() ? "" : ", ") + r.name;
    return {kExitBoundViolation, "verify: bound violation in " + names};
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.experiment == "landscape") return run_landscape(cfg);
    if (cfg.experiment == "train") return run_train(cfg);
    if (cfg.experiment == "sweep") return run_sweep(cfg);
    if (cfg.experiment == "verify") return run_verify(cfg);
    throw ConfigError("unknown experiment: " + cfg.experiment);
}

}  // namespace qvmc
