#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qvmc/circuits.hpp"
#include "qvmc/guiding.hpp"
#include "qvmc/pauli.hpp"
#include "qvmc/rng.hpp"

namespace qvmc {

enum class EstimatorMode { exact, shot_noise };

// How the Hadamard-test emulation measures a decomposed operator:
//  - real_part_only: one measurement per shot, estimate is real
//    (variance constant C_O^2 / M_Q; 1/M_Q for a unit-coefficient word);
//  - two_part: real and imaginary interference circuits per shot
//    (variance constant 2 C_O^2 / M_Q);
//  - auto_select: real_part_only for a single unit-coefficient Hermitian
//    word (it is unitary), two_part otherwise.
enum class MeasureProtocol { auto_select, real_part_only, two_part };

struct EstimatorConfig {
    std::uint64_t M = 1000;  // pair samples
    int M_Q = 1;             // shots per Hadamard test (ignored in exact mode)
    EstimatorMode mode = EstimatorMode::exact;
    MeasureProtocol protocol = MeasureProtocol::auto_select;
    std::uint64_t seed = 0;
    bool keep_ledger = false;

    void validate() const;
};

struct LedgerRow {
    std::uint64_t sample;
    std::size_t theta_index;
    std::size_t theta_prime_index;
    cplx x_hat;
};

struct EstimatorReport {
    cplx estimate;
    std::uint64_t samples = 0;
    double empirical_variance = 0.0;  // (1/(M-1)) sum |X_s - mean|^2
    double sigma2_used = 0.0;         // measurement-noise constant for the mode
    std::vector<LedgerRow> ledger;
};

// CSV export: sample-index, theta-index, theta-prime-index, Re X, Im X.
void write_ledger_csv(const EstimatorReport& report, const std::string& path,
                      const std::string& header_comment);

struct MHConfig {
    double proposal_stddev = 0.1;  // radians
    std::size_t burn_in = 1000;
    std::size_t thin = 10;
    std::uint64_t seed = 0;

    void validate() const;
};

// Two independent categorical draws from the ensemble's P.
std::pair<std::size_t, std::size_t> sample_pair(const GridEnsemble& ens, Rng& rng);

// Metropolis-Hastings over a continuous prior: symmetric Gaussian proposal,
// acceptance |alpha(theta*)| / |alpha(theta)|. Returns post-burn-in samples
// thinned by cfg.thin, starting from `start`.
std::vector<std::vector<double>> metropolis_chain(const GuidingNet& net,
                                                  const PriorGuiding& prior,
                                                  const std::vector<double>& start,
                                                  const MHConfig& cfg, std::size_t n_samples);

// Precomputed grid states plus operator Gram matrices; immutable once built
// and shared read-only by all sampling workers. Rebuilding is only needed
// when the grid itself changes (the guiding parameters do not enter).
class EnsembleCache {
public:
    EnsembleCache(const AnsatzSpec& spec, std::vector<std::vector<double>> points);

    std::size_t size() const { return states_.size(); }
    const StateVec& state(std::size_t i) const { return states_[i]; }
    const std::vector<std::vector<double>>& points() const { return points_; }

    // Row j, column i holds <phi_j| O |phi_i>.
    struct Gram {
        std::size_t n = 0;
        std::vector<cplx> a;
        cplx at(std::size_t j, std::size_t i) const { return a[j * n + i]; }
    };
    Gram gram(const PauliSum& O) const;

private:
    std::vector<std::vector<double>> points_;
    std::vector<StateVec> states_;
};

// Interference quantity X(theta, theta') for one sampled pair.
// Exact mode: e^{i(gamma - gamma')} <phi(theta')| O |phi(theta)> from
// statevectors. Shot-noise mode: emulates the ancilla Hadamard test from
// exact Born probabilities — per shot, draws a term j with probability
// |a_j|/C_O and a +-1 outcome with P(+1) = (1 + Re[e^{i nu_j} <phi'|V_j|phi>])/2,
// with the imaginary part read from the -pi/2-shifted circuit.
cplx x_quantity(const AnsatzSpec& ansatz, const GuidingNet& net, const PriorGuiding& prior,
                const std::vector<double>& theta, const std::vector<double>& theta_prime,
                const PauliSum& O, const EstimatorConfig& cfg, Rng& rng);

// Algorithm core: mean of M i.i.d. X draws over pairs from P x P.
// Deterministic for a fixed seed regardless of worker count (per-sample RNG
// streams, serial reduction).
EstimatorReport operator_estimator(const AnsatzSpec& ansatz, const GuidingNet& net,
                                   const PriorGuiding& prior, const PauliSum& O,
                                   const EstimatorConfig& cfg);

// Same estimator against a prebuilt cache/ensemble (the hot path).
EstimatorReport operator_estimator_cached(const EnsembleCache& cache, const GridEnsemble& ens,
                                          const PauliSum& O, const EnsembleCache::Gram& gram,
                                          const EstimatorConfig& cfg);

// Joint estimates of an operator and the identity sharing each sample's
// (theta, theta') pair, as ratio losses require: correlated errors partly
// cancel in the quotient. Pair draws come from the per-sample stream
// derive_seed(cfg.seed, s); in shot-noise mode the two operators consume
// disjoint shot sub-streams.
std::pair<EstimatorReport, EstimatorReport> paired_estimates(const EnsembleCache& cache,
                                                             const GridEnsemble& ens,
                                                             const PauliSum& O,
                                                             const EnsembleCache::Gram& gram_o,
                                                             const EnsembleCache::Gram& gram_1,
                                                             const EstimatorConfig& cfg);

// O = identity; exact-mode value lies in [0, 1].
EstimatorReport estimate_norm(const AnsatzSpec& ansatz, const GuidingNet& net,
                              const PriorGuiding& prior, const EstimatorConfig& cfg);

// Brute-force O(N^2) double sum sum_ij P_i P_j e^{i(gamma_i - gamma_j)} <phi_j|O|phi_i>;
// the oracle the sampled estimator must converge to.
cplx exact_expectation(const GridEnsemble& ens, const EnsembleCache::Gram& gram);
cplx exact_expectation(const AnsatzSpec& ansatz, const GuidingNet& net,
                       const PriorGuiding& prior, const PauliSum& O);

// Measurement-noise constant sigma_O^2 for a decomposition under a protocol
// (0 in exact mode).
double measurement_sigma2(const PauliSum& O, const EstimatorConfig& cfg);

}  // namespace qvmc
