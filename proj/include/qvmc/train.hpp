#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qvmc/circuits.hpp"
#include "qvmc/guiding.hpp"
#include "qvmc/mc.hpp"
#include "qvmc/pauli.hpp"

namespace qvmc {

enum class LossKind { raw, barrier, regularized };

struct LossConfig {
    LossKind kind = LossKind::barrier;

    // How the loss is computed: `deterministic` evaluates the full grid
    // double sum in closed form (analytic gradients); `sampled` estimates
    // <H>-hat and <1>-hat by Monte Carlo per the estimator settings
    // (finite-difference gradients with common random numbers).
    enum class Evaluation { deterministic, sampled };
    Evaluation evaluation = Evaluation::deterministic;

    double barrier_x = 0.8;
    double barrier_y = 1.0;
    double barrier_z = 5.0;

    // Failure budget for the regularized loss; eta_H and eta_1 follow from
    // it, the sample size and the measurement-noise constants.
    double kappa = 0.05;

    EstimatorConfig estimator;

    void validate() const;
};

// -z * tanh((norm_value - x) / y).
double barrier_term(double norm_value, double x, double y, double z);

// eta = sqrt((norm^2 + sigma^2) / (kappa M)) pair for the regularized loss;
// `spectral_norm` and `sigma_h2` refer to the operator actually measured
// (the shifted Hamiltonian when the energy shift is in effect).
struct RegularizerEtas {
    double eta_h = 0.0;
    double eta_one = 0.0;
};
RegularizerEtas regularizer_etas(double spectral_norm, double sigma_h2, double sigma_12,
                                 double kappa, std::uint64_t m);

struct LossValue {
    double loss = 0.0;       // objective value (shifted units under the energy shift)
    double energy = 0.0;     // <H>-hat in original units
    double norm = 0.0;       // <1>-hat
    double raw_ratio = 0.0;  // <H>-hat / <1>-hat, original units
    bool denominator_fault = false;
};

// Which objective a stage minimizes: stage 1 uses the tanh barrier alone,
// stage 2 the configured loss kind.
enum class LossStage { barrier_only, full };

// Loss/gradient oracle over a fixed delta-grid prior. States and Gram
// matrices are cached once (they do not depend on the guiding parameters);
// each evaluation costs one network pass per grid point plus two
// grid-sized matrix-vector products.
class GridLossEvaluator {
public:
    GridLossEvaluator(AnsatzSpec ansatz, PriorGuiding prior, PauliSum h);

    LossValue value(const GuidingNet& net, const LossConfig& cfg, LossStage stage,
                    std::uint64_t eval_index) const;
    // dLoss/dparams, same layout as net.params(). Deterministic evaluation
    // differentiates analytically through the double sum and the network;
    // sampled evaluation uses central differences (step 1e-3) with the same
    // eval_index on both sides so the noise is common.
    std::vector<double> gradient(const GuidingNet& net, const LossConfig& cfg, LossStage stage,
                                 std::uint64_t eval_index) const;

    // Energy shift applied under the regularized loss (0 otherwise); reports
    // add it back.
    double energy_shift(const LossConfig& cfg) const;

    double h_spectral_norm() const { return h_norm_; }
    double shifted_spectral_norm() const { return h_shifted_norm_; }
    std::size_t grid_size() const { return cache_.size(); }
    const AnsatzSpec& ansatz() const { return ansatz_; }
    const PriorGuiding& prior() const { return prior_; }
    const PauliSum& hamiltonian() const { return h_; }
    const EnsembleCache& cache() const { return cache_; }
    const EnsembleCache::Gram& gram_h() const { return gram_h_; }
    const EnsembleCache::Gram& gram_identity() const { return gram_1_; }

private:
    struct GridPass;  // per-evaluation scalars (defined in the implementation)
    GridPass deterministic_pass(const GuidingNet& net) const;

    AnsatzSpec ansatz_;
    PriorGuiding prior_;
    PauliSum h_;
    PauliSum h_shifted_;
    double h_norm_ = 0.0;
    double h_shifted_norm_ = 0.0;
    EnsembleCache cache_;
    EnsembleCache::Gram gram_h_;
    EnsembleCache::Gram gram_1_;
    EnsembleCache::Gram gram_h_shifted_;
};

struct AdamConfig {
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    AdamConfig cfg;
    std::uint64_t step = 0;
    std::vector<double> m;  // first-moment accumulator
    std::vector<double> v;  // second-moment accumulator

    explicit AdamState(std::size_t n_params, AdamConfig config = {});
    // One bias-corrected update in place.
    void apply(std::span<double> params, std::span<const double> grad);
};

struct TraceRow {
    std::uint64_t iteration = 0;
    int stage = 1;
    double loss = 0.0;
    double energy = 0.0;
    double norm = 0.0;
    double elapsed_seconds = 0.0;
};

struct TrainTrace {
    std::vector<TraceRow> rows;
};

// Columns: iteration, stage, loss, energy-estimate, norm-estimate,
// elapsed-seconds.
void write_trace_csv(const TrainTrace& trace, const std::string& path,
                     const std::string& header_comment);

struct TrainBudget {
    std::uint64_t stage1_max = 5000;
    std::uint64_t stage2_iterations = 2000;
    // Stage-2 early stop: quit after this many iterations without the best
    // loss improving by more than `patience_tol` (0 disables).
    std::uint64_t patience = 250;
    double patience_tol = 1e-10;
};

struct TrainResult {
    TrainTrace trace;
    GuidingNet net;
    bool stage1_crossed = false;
    std::uint64_t stage1_iterations = 0;  // evaluations spent in stage 1
    // Deterministic runs only: stage-2 loss satisfied
    // L[t + 50] <= L[t] + 1e-9 for every window in the trace.
    bool monotone_ok = true;
    // A loss evaluation hit a divide fault or went non-finite; training
    // stopped at that point.
    bool loss_fault = false;
    LossValue final_value;
    // Optimizer state at the point training stopped (for checkpointing).
    AdamState adam{0};
};

// Stage 1 minimizes the barrier term alone until <1>-hat exceeds barrier_x
// on three consecutive evaluations (noise-spike protection); stage 2 then
// minimizes the configured objective from the stage-1 parameters with a
// fresh optimizer state. Fails explicitly if stage 1 exhausts its budget.
TrainResult two_stage_train(const GridLossEvaluator& eval, GuidingNet net,
                            const LossConfig& loss, const AdamConfig& adam,
                            const TrainBudget& budget);

struct SweepRow {
    double x = 0.0;
    std::uint64_t repeat = 0;
    std::uint64_t seed = 0;
    double final_energy = 0.0;  // raw ratio, original units
    double final_norm = 0.0;
    double final_loss = 0.0;
    bool stage1_crossed = false;
    std::uint64_t stage1_iterations = 0;
    bool monotone_ok = true;
};

// How each sweep row obtains its starting network. `random_net` draws fresh
// weights from the row seed; `delta_center` starts every row from the
// analytic near-delta construction (concentration sharpness `delta_tau`,
// center `delta_center`, all-zeros when empty) and applies a seeded Gaussian
// jitter of stddev `jitter` to the parameters so repeats stay distinct. The
// delta start enters stage 2 already inside the feasible region, which
// matters when the barrier wall is sharp.
enum class SweepInit { random_net, delta_center };

struct SweepSettings {
    std::vector<double> x_values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::uint64_t repeats = 10;
    std::uint64_t root_seed = 1;
    LossConfig loss;  // barrier_x is overridden per row
    AdamConfig adam;
    TrainBudget budget;
    std::vector<int> hidden = {200, 200};
    WChoice w_choice = WChoice::exp_neg;
    SweepInit init = SweepInit::random_net;
    // delta_center mode only; the delta construction fixes its own
    // architecture (one hidden layer, W = exp-neg), so `hidden` and
    // `w_choice` are ignored for those rows.
    std::vector<double> delta_center;  // empty: all zeros
    double delta_tau = 12.0;
    double jitter = 0.1;
};

// One row per (x, repeat): fresh network seed derive_seed(root_seed, row)
// by row index, rows independent and run in parallel. Training failures
// surface as flagged rows, not exceptions.
std::vector<SweepRow> barrier_sweep(const GridLossEvaluator& eval, const SweepSettings& s);

// Columns: x, repeat, seed, final-energy, final-norm, final-loss,
// stage1-crossed, stage1-iterations, monotone-ok.
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path,
                     const std::string& header_comment);

// Guiding checkpoint JSON augmented with the optimizer state.
void save_train_checkpoint(const GuidingNet& net, const PriorGuiding& prior,
                           std::uint64_t seed, const AdamState& adam, const std::string& path);

}  // namespace qvmc
