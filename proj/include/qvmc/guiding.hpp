#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qvmc/pauli.hpp"

namespace qvmc {

// Modulus envelope W(A): |A|, exp(-A), or exp(-A^2/2).
enum class WChoice { abs_val, exp_neg, gauss };

double w_value(WChoice w, double A);
double w_derivative(WChoice w, double A);  // dW/dA (subgradient 0 at the |A| kink)

const char* w_choice_name(WChoice w);
WChoice w_choice_from_name(const std::string& name);

// Rectifier network mapping a circuit parameter vector to the two real
// outputs (A, B) that define the guiding function alpha = W(A) e^{iB} F.
// Parameters live in one flat vector laid out as
//   [W_0 (out x in, row-major), b_0, W_1, b_1, ..., w_A, b_A, w_B, b_B]
// so the optimizer and checkpoints can treat lambda as a single array.
class GuidingNet {
public:
    GuidingNet() = default;
    GuidingNet(int input_width, std::vector<int> hidden_widths, WChoice w_choice);

    int input_width() const { return input_; }
    const std::vector<int>& hidden_widths() const { return hidden_; }
    WChoice w_choice() const { return w_; }

    std::size_t param_count() const { return params_.size(); }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    // Glorot-uniform hidden layers, zero output heads (so training starts at
    // the maximum-entropy uniform distribution over the grid).
    void init_random(std::uint64_t seed);

    struct Output {
        double A;
        double B;
    };
    Output forward(std::span<const double> theta) const;

    // Forward pass that records activations for backpropagation. One
    // workspace per thread; reusable across calls.
    struct Workspace {
        std::vector<std::vector<double>> pre;  // pre-activations per hidden layer
        std::vector<std::vector<double>> act;  // post-ReLU activations
        std::vector<std::vector<double>> delta;
    };
    Output forward_cached(std::span<const double> theta, Workspace& ws) const;

    // Accumulates d(gA * A + gB * B)/dparams into grad (same layout/length as
    // params). Requires the workspace from the matching forward_cached call;
    // the workspace's delta buffers are scratch.
    void backward(std::span<const double> theta, Workspace& ws, double gA, double gB,
                  std::span<double> grad) const;

    // Mutable access for the analytic parameter constructions.
    std::span<double> layer_weights(std::size_t layer);
    std::span<double> layer_biases(std::size_t layer);
    std::span<double> head_A_weights();
    std::span<double> head_B_weights();
    double& head_A_bias();
    double& head_B_bias();

private:
    friend struct NetLayout;
    int input_ = 0;
    std::vector<int> hidden_;
    WChoice w_ = WChoice::exp_neg;
    std::vector<double> params_;
};

// Fixed multiplicative prior F(theta).
struct PriorGuiding {
    enum class Kind { constant_one, delta_grid, evolution_series };
    Kind kind = Kind::constant_one;

    // delta_grid support: explicit points with complex weights, plus the
    // recorded seed/box they were drawn from (0 seed = hand-specified points).
    std::vector<std::vector<double>> points;
    std::vector<cplx> weights;
    std::uint64_t seed = 0;
    double box_min = 0.0;
    double box_max = 0.0;

    // evolution_series: support described implicitly by a truncation order;
    // only the dedicated verification routine evaluates it.
    int k_max = 0;

    void validate() const;
};

// N_points i.i.d. uniform draws over [box_min, box_max)^K from the given
// seed, unit weights.
PriorGuiding uniform_grid_prior(std::size_t K, std::size_t n_points, double box_min,
                                double box_max, std::uint64_t seed);

PriorGuiding constant_prior();

// alpha(theta) = W(A) e^{iB} F(theta). For the delta-grid prior, theta must
// coincide with a grid point (the matching weight is folded in).
cplx alpha(const GuidingNet& net, const PriorGuiding& prior, std::span<const double> theta);

// W(A_i) and W'(A_i) over a batch of head outputs with one common positive
// factor exp(log_scale) divided out (log_scale = 0 for the |A| choice).
// Every normalized ensemble quantity is invariant under the common rescale;
// it exists so the exponential W choices cannot overflow once training
// spreads the head outputs across hundreds of units.
struct ScaledWeights {
    std::vector<double> w;   // W(A_i)  * exp(-log_scale)
    std::vector<double> dw;  // W'(A_i) * exp(-log_scale)
    double log_scale = 0.0;
};
ScaledWeights scaled_weights(WChoice choice, std::span<const double> A);

// Discrete sampling snapshot over a delta-grid prior.
struct GridEnsemble {
    std::vector<std::vector<double>> points;
    std::vector<double> P;       // |alpha_i| / C
    std::vector<double> gamma;   // arg alpha_i
    std::vector<cplx> alpha;     // guiding values times exp(-log_scale)
    double C = 0.0;              // sum_i |alpha_i| (infinity for extreme heads)
    double log_scale = 0.0;      // common weight scale factored out of alpha
};

GridEnsemble grid_ensemble(const GuidingNet& net, const PriorGuiding& prior);

// Analytic construction concentrating P near theta0: alpha is proportional
// to (tau/2)^K exp(-tau * ||theta' - theta0||_1), with A offset K ln(2/tau).
GuidingNet delta_approx_params(const std::vector<double>& theta0, double tau);

// Analytic construction for the full Hamiltonian ansatz: reading t from
// input component 0, produces A = N_T |t| / tau (W = gauss, so only A^2
// enters) and B = E_g N_T t, turning the ensemble average into a Gaussian
// energy filter.
GuidingNet projection_params(double ground_energy, double tau, int n_trotter, int input_width);

// JSON checkpoint: layer shapes, flat parameters, W choice, prior
// descriptor, RNG seed.
void save_checkpoint(const GuidingNet& net, const PriorGuiding& prior, std::uint64_t seed,
                     const std::string& path);
struct Checkpoint {
    GuidingNet net;
    PriorGuiding prior;
    std::uint64_t seed = 0;
};
Checkpoint load_checkpoint(const std::string& path);

}  // namespace qvmc
