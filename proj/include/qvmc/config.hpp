#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qvmc/train.hpp"

namespace qvmc {

// Raised for anything wrong with an experiment configuration: unreadable
// file, malformed JSON (with the parser's position context), unknown keys,
// or values that fail validation.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelConfig {
    std::string graph_file;  // takes precedence over the inline edge list
    // Default model: the 8-vertex instance shipped in data/graph8.txt.
    int n_vertices = 8;
    std::vector<std::pair<int, int>> edges = {{0, 1}, {1, 2}, {1, 3}, {2, 3},
                                              {3, 4}, {4, 5}, {6, 7}};
    double coupling = 1.0;
    bool normalize = true;
};

struct AnsatzConfig {
    std::string kind = "simplified";  // simplified | full
    int trotter_steps = 2;
    std::string init = "singlet";  // singlet | zero
};

struct PriorConfig {
    std::string kind = "delta-grid";  // constant | delta-grid | evolution-series
    std::size_t points = 100;
    double box_min = 0.0;
    double box_max = 6.283185307179586;
    int k_max = 3;
};

struct GuidingConfig {
    std::vector<int> hidden = {32, 32};
    std::string w_choice = "exp-neg";  // abs | exp-neg | gauss
    PriorConfig prior;
};

struct EstimatorSettings {
    std::uint64_t pair_samples = 1000;
    int shots_per_test = 1;
    std::string protocol = "auto";  // auto | real-part | two-part
};

struct LossSettings {
    std::string kind = "barrier";  // raw | barrier | regularized
    double barrier_x = 0.8;
    double barrier_y = 1.0;
    double barrier_z = 5.0;
    double kappa = 0.05;
    EstimatorSettings estimator;
};

struct TrainSettings {
    AdamConfig adam;
    TrainBudget budget;
};

struct SweepConfigSection {
    std::vector<double> x_values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::uint64_t repeats = 10;
    // "random": fresh weights per row; "delta": analytic near-delta start
    // (sharpness delta_tau, center delta_center or all zeros) plus seeded
    // Gaussian parameter jitter.
    std::string init = "random";
    std::vector<double> delta_center;
    double delta_tau = 12.0;
    double jitter = 0.1;
};

struct LandscapeConfigSection {
    int resolution = 101;
    std::vector<std::pair<double, double>> starts = {
        {1.0, 1.0}, {2.0, 5.0}, {4.0, 2.0}, {5.5, 5.5}, {0.5, 4.0}};
    int descent_steps = 200;
    double descent_rate = 0.05;
};

struct VerifySection {
    std::string filter;
};

struct ExperimentConfig {
    std::string experiment = "train";  // landscape | train | sweep | verify
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::string mode = "exact";  // exact | shots

    ModelConfig model;
    AnsatzConfig ansatz;
    GuidingConfig guiding;
    LossSettings loss;
    TrainSettings train;
    SweepConfigSection sweep;
    LandscapeConfigSection landscape;
    VerifySection verify;

    void validate() const;  // throws ConfigError
};

ExperimentConfig default_config(const std::string& experiment);

// Parse/serialize the JSON config file. load_config validates; parse errors
// carry the file path and the parser's position context.
ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& cfg, const std::string& path);

// Fully resolved single-line JSON (for output-file header comments).
std::string config_json(const ExperimentConfig& cfg);

}  // namespace qvmc
