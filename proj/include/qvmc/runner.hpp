#pragma once

#include <string>

#include "qvmc/circuits.hpp"
#include "qvmc/config.hpp"
#include "qvmc/guiding.hpp"
#include "qvmc/model.hpp"
#include "qvmc/train.hpp"

namespace qvmc {

// Process exit codes shared by the CLI and the experiment drivers.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitTrainingFailure = 2;
inline constexpr int kExitBoundViolation = 3;

struct RunResult {
    int exit_code = kExitOk;
    std::string message;  // one-line outcome summary for the CLI to print
};

// Config section -> concrete objects; shared by the drivers and the tests.
struct ResolvedModel {
    InteractionGraph graph;
    PauliSum hamiltonian;  // spectrally normalized when the config asks for it
    double scale = 1.0;    // spectral norm divided out (1 when not normalized)
};
ResolvedModel resolve_model(const ModelConfig& mc);

AnsatzSpec resolve_ansatz(const AnsatzConfig& ac, const ResolvedModel& model);

PriorGuiding resolve_prior(const PriorConfig& pc, std::size_t n_params, std::uint64_t seed);

// Maps mode "exact" to deterministic evaluation / exact estimator and
// "shots" to sampled evaluation / shot-noise emulation.
LossConfig resolve_loss(const LossSettings& ls, const std::string& mode,
                        std::uint64_t estimator_seed);

// Deterministic-circuit minimum of the simplified-ansatz energy over a
// resolution x resolution grid on [0, 2pi)^2; the dashed reference line
// the barrier sweep is compared against.
struct GridMinimum {
    double energy = 0.0;
    double theta_xy = 0.0;
    double theta_z = 0.0;
};
GridMinimum landscape_grid_min(const AnsatzSpec& spec, const PauliSum& h, int resolution);

// Experiment drivers. Each creates cfg.out_dir, writes the resolved config
// there alongside its data files (every file embeds the config and seed),
// and returns the process exit code plus a one-line summary. Configuration
// problems throw ConfigError; the CLI maps those (and any other exception)
// to kExitConfigError. Training failures and bound violations come back
// through the exit code, not exceptions.
RunResult run_landscape(const ExperimentConfig& cfg);  // grid.csv, trajectories.csv, summary.json
RunResult run_train(const ExperimentConfig& cfg);      // trace.csv, checkpoint.json, summary.json
RunResult run_sweep(const ExperimentConfig& cfg);      // sweep.csv, reference.json
RunResult run_verify(const ExperimentConfig& cfg);     // bounds.json

// Dispatch on cfg.experiment.
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace qvmc
