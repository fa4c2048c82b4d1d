#include "qvmc/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "qvmc/kernels.hpp"
#include "qvmc/parallel.hpp"

namespace qvmc {

namespace {

// Measurement decomposition O = sum_j a_j V_j flattened for the sampling
// loop: per-term masks, phases arg(a_j), the |a_j| cumulative table, and the
// resolved protocol.
struct Decomposition {
    double C = 0.0;
    std::vector<kern::Masks> masks;
    std::vector<double> args;
    std::vector<double> cdf;
    bool real_part_only = false;
};

Decomposition make_decomposition(const PauliSum& O, MeasureProtocol protocol) {
    if (O.empty()) throw std::invalid_argument("operator decomposition is empty");
    Decomposition d;
    d.C = O.coeff_one_norm();
    if (!(d.C > 0.0)) throw std::invalid_argument("operator decomposition has zero weight");
    std::vector<double> w;
    w.reserve(O.size());
    for (const auto& term : O.terms()) {
        d.masks.push_back(term.word.masks());
        d.args.push_back(term.coeff < 0.0 ? M_PI : 0.0);
        w.push_back(std::abs(term.coeff));
    }
    d.cdf = cumulative(w);
    switch (protocol) {
        case MeasureProtocol::real_part_only:
            d.real_part_only = true;
            break;
        case MeasureProtocol::two_part:
            d.real_part_only = false;
            break;
        case MeasureProtocol::auto_select:
            // A single unit-coefficient Hermitian word is unitary, so one
            // interference circuit per shot suffices and its outcome is real.
            d.real_part_only = O.size() == 1 && std::abs(d.C - 1.0) <= 1e-12;
            break;
    }
    return d;
}

// One Hadamard-test emulation: M_Q shots against exact Born probabilities.
cplx shot_noise_x(const StateVec& phi, const StateVec& phi_prime, double gamma_diff,
                  const Decomposition& d, int m_q, Rng& rng) {
    const std::size_t dim = phi.dim();
    double sum_re = 0.0;
    double sum_im = 0.0;
    for (int shot = 0; shot < m_q; ++shot) {
        const std::size_t j = rng.categorical_from_cdf(d.cdf);
        const cplx z =
            kern::pauli_bilinear(phi_prime.amps.data(), d.masks[j], phi.amps.data(), dim);
        const double nu = gamma_diff + d.args[j];
        const cplx w = std::polar(1.0, nu) * z;
        const double p_re = std::clamp(0.5 * (1.0 + w.real()), 0.0, 1.0);
        sum_re += rng.uniform() < p_re ? 1.0 : -1.0;
        if (!d.real_part_only) {
            // Same circuit with the ancilla phase shifted by -pi/2 reads off
            // the imaginary part.
            const double p_im = std::clamp(0.5 * (1.0 + w.imag()), 0.0, 1.0);
            sum_im += rng.uniform() < p_im ? 1.0 : -1.0;
        }
    }
    const double inv = 1.0 / static_cast<double>(m_q);
    return d.C * cplx(sum_re * inv, d.real_part_only ? 0.0 : sum_im * inv);
}

// O |phi| accumulated term by term.
std::vector<cplx> apply_sum(const PauliSum& O, const StateVec& phi) {
    const std::size_t dim = phi.dim();
    std::vector<cplx> out(dim, cplx(0.0));
    std::vector<cplx> tmp(dim);
    for (const auto& term : O.terms()) {
        kern::apply_pauli(term.word.masks(), phi.amps.data(), tmp.data(), dim);
        for (std::size_t y = 0; y < dim; ++y) out[y] += term.coeff * tmp[y];
    }
    return out;
}

void finalize_report(EstimatorReport& report, const std::vector<cplx>& xs) {
    const std::size_t m = xs.size();
    cplx sum(0.0);
    for (const cplx& x : xs) sum += x;  // serial, index order: reproducible
    const cplx mean = sum / static_cast<double>(m);
    double var = 0.0;
    for (const cplx& x : xs) var += std::norm(x - mean);
    report.estimate = mean;
    report.samples = m;
    report.empirical_variance = m > 1 ? var / static_cast<double>(m - 1) : 0.0;
}

}  // namespace

void EstimatorConfig::validate() const {
    if (M < 1) throw std::invalid_argument("estimator sample size M must be at least 1");
    if (M_Q < 1) throw std::invalid_argument("shots per Hadamard test must be at least 1");
}

void MHConfig::validate() const {
    if (!(proposal_stddev > 0.0))
        throw std::invalid_argument("proposal stddev must be positive");
    if (thin == 0) throw std::invalid_argument("thinning stride must be positive");
}

double measurement_sigma2(const PauliSum& O, const EstimatorConfig& cfg) {
    if (cfg.mode == EstimatorMode::exact) return 0.0;
    const Decomposition d = make_decomposition(O, cfg.protocol);
    const double mq = static_cast<double>(cfg.M_Q);
    if (d.real_part_only) {
        const bool unit_single = O.size() == 1 && std::abs(d.C - 1.0) <= 1e-12;
        return unit_single ? 1.0 / mq : d.C * d.C / mq;
    }
    return 2.0 * d.C * d.C / mq;
}

std::pair<std::size_t, std::size_t> sample_pair(const GridEnsemble& ens, Rng& rng) {
    if (ens.points.empty()) throw std::invalid_argument("empty ensemble");
    const std::vector<double> cdf = cumulative(ens.P);
    const std::size_t first = rng.categorical_from_cdf(cdf);
    const std::size_t second = rng.categorical_from_cdf(cdf);
    return {first, second};
}

std::vector<std::vector<double>> metropolis_chain(const GuidingNet& net,
                                                  const PriorGuiding& prior,
                                                  const std::vector<double>& start,
                                                  const MHConfig& cfg, std::size_t n_samples) {
    cfg.validate();
    if (prior.kind != PriorGuiding::Kind::constant_one)
        throw std::invalid_argument("Markov-chain sampling needs a continuous prior");
    Rng rng(cfg.seed);
    std::vector<double> cur = start;
    double cur_abs = std::abs(alpha(net, prior, cur));
    if (!(cur_abs > 0.0))
        throw std::domain_error("guiding amplitude vanishes at the chain start");
    std::vector<std::vector<double>> out;
    out.reserve(n_samples);
    std::vector<double> proposal(cur.size());
    const std::size_t total = cfg.burn_in + n_samples * cfg.thin;
    for (std::size_t step = 0; step < total; ++step) {
        for (std::size_t k = 0; k < cur.size(); ++k)
            proposal[k] = cur[k] + cfg.proposal_stddev * rng.normal();
        const double prop_abs = std::abs(alpha(net, prior, proposal));
        const double ratio = prop_abs / cur_abs;
        if (ratio >= 1.0 || rng.uniform() < ratio) {
            cur = proposal;
            cur_abs = prop_abs;
        }
        if (step >= cfg.burn_in && (step - cfg.burn_in) % cfg.thin == cfg.thin - 1)
            out.push_back(cur);
    }
    return out;
}

EnsembleCache::EnsembleCache(const AnsatzSpec& spec, std::vector<std::vector<double>> points)
    : points_(std::move(points)) {
    spec.validate();
    if (points_.empty()) throw std::invalid_argument("ensemble cache needs at least one point");
    for (const auto& p : points_)
        if (p.size() != spec.n_params())
            throw std::invalid_argument("grid point width does not match the ansatz");
    states_.resize(points_.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(points_.size());
#pragma omp parallel for schedule(dynamic) if (n > 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) states_[i] = prepare(spec, points_[i]);
}

EnsembleCache::Gram EnsembleCache::gram(const PauliSum& O) const {
    const std::size_t n_states = states_.size();
    const std::size_t dim = states_[0].dim();
    std::vector<std::vector<cplx>> o_phi(n_states);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(n_states);
#pragma omp parallel for schedule(dynamic) if (n > 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) o_phi[i] = apply_sum(O, states_[i]);
    Gram g;
    g.n = n_states;
    g.a.resize(n_states * n_states);
#pragma omp parallel for schedule(static) if (n > 1)
    for (std::ptrdiff_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n_states; ++i)
            g.a[static_cast<std::size_t>(j) * n_states + i] =
                kern::inner(states_[j].amps.data(), o_phi[i].data(), dim);
    return g;
}

cplx x_quantity(const AnsatzSpec& ansatz, const GuidingNet& net, const PriorGuiding& prior,
                const std::vector<double>& theta, const std::vector<double>& theta_prime,
                const PauliSum& O, const EstimatorConfig& cfg, Rng& rng) {
    const cplx a = alpha(net, prior, theta);
    const cplx ap = alpha(net, prior, theta_prime);
    const double gamma_diff = std::arg(a) - std::arg(ap);
    const StateVec phi = prepare(ansatz, theta);
    const StateVec phi_prime = prepare(ansatz, theta_prime);
    if (cfg.mode == EstimatorMode::exact)
        return std::polar(1.0, gamma_diff) * matrix_element(phi_prime, O, phi);
    const Decomposition d = make_decomposition(O, cfg.protocol);
    return shot_noise_x(phi, phi_prime, gamma_diff, d, cfg.M_Q, rng);
}

EstimatorReport operator_estimator_cached(const EnsembleCache& cache, const GridEnsemble& ens,
                                          const PauliSum& O, const EnsembleCache::Gram& gram,
                                          const EstimatorConfig& cfg) {
    cfg.validate();
    if (ens.points.size() != cache.size() || gram.n != cache.size())
        throw std::invalid_argument("ensemble, cache and Gram sizes disagree");
    const std::size_t m = cfg.M;
    std::vector<cplx> xs(m);
    std::vector<std::size_t> first(m), second(m);
    const std::vector<double> cdf = cumulative(ens.P);
    const bool shots = cfg.mode == EstimatorMode::shot_noise;
    const Decomposition d =
        shots ? make_decomposition(O, cfg.protocol) : Decomposition{};
    const std::ptrdiff_t mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static) if (mm > 1)
    for (std::ptrdiff_t s = 0; s < mm; ++s) {
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(s)));
        const std::size_t i = rng.categorical_from_cdf(cdf);  // theta
        const std::size_t j = rng.categorical_from_cdf(cdf);  // theta'
        first[s] = i;
        second[s] = j;
        const double gamma_diff = ens.gamma[i] - ens.gamma[j];
        if (shots) {
            xs[s] = shot_noise_x(cache.state(i), cache.state(j), gamma_diff, d, cfg.M_Q, rng);
        } else {
            xs[s] = std::polar(1.0, gamma_diff) * gram.at(j, i);
        }
    }
    EstimatorReport report;
    finalize_report(report, xs);
    report.sigma2_used = measurement_sigma2(O, cfg);
    if (cfg.keep_ledger) {
        report.ledger.reserve(m);
        for (std::size_t s = 0; s < m; ++s)
            report.ledger.push_back({s, first[s], second[s], xs[s]});
    }
    return report;
}

std::pair<EstimatorReport, EstimatorReport> paired_estimates(const EnsembleCache& cache,
                                                             const GridEnsemble& ens,
                                                             const PauliSum& O,
                                                             const EnsembleCache::Gram& gram_o,
                                                             const EnsembleCache::Gram& gram_1,
                                                             const EstimatorConfig& cfg) {
    cfg.validate();
    if (ens.points.size() != cache.size() || gram_o.n != cache.size() ||
        gram_1.n != cache.size())
        throw std::invalid_argument("ensemble, cache and Gram sizes disagree");
    const PauliSum identity = PauliSum::identity(O.n());
    const std::size_t m = cfg.M;
    std::vector<cplx> xs_o(m), xs_1(m);
    std::vector<std::size_t> first(m), second(m);
    const std::vector<double> cdf = cumulative(ens.P);
    const bool shots = cfg.mode == EstimatorMode::shot_noise;
    const Decomposition d_o = shots ? make_decomposition(O, cfg.protocol) : Decomposition{};
    const Decomposition d_1 =
        shots ? make_decomposition(identity, cfg.protocol) : Decomposition{};
    const std::ptrdiff_t mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static) if (mm > 1)
    for (std::ptrdiff_t s = 0; s < mm; ++s) {
        const std::uint64_t seed_s = derive_seed(cfg.seed, static_cast<std::uint64_t>(s));
        Rng rng(seed_s);
        const std::size_t i = rng.categorical_from_cdf(cdf);  // theta
        const std::size_t j = rng.categorical_from_cdf(cdf);  // theta'
        first[s] = i;
        second[s] = j;
        const double gamma_diff = ens.gamma[i] - ens.gamma[j];
        if (shots) {
            Rng rng_o(derive_seed(seed_s, 1));
            Rng rng_1(derive_seed(seed_s, 2));
            xs_o[s] = shot_noise_x(cache.state(i), cache.state(j), gamma_diff, d_o, cfg.M_Q,
                                   rng_o);
            xs_1[s] = shot_noise_x(cache.state(i), cache.state(j), gamma_diff, d_1, cfg.M_Q,
                                   rng_1);
        } else {
            const cplx rot = std::polar(1.0, gamma_diff);
            xs_o[s] = rot * gram_o.at(j, i);
            xs_1[s] = rot * gram_1.at(j, i);
        }
    }
    std::pair<EstimatorReport, EstimatorReport> out;
    finalize_report(out.first, xs_o);
    finalize_report(out.second, xs_1);
    out.first.sigma2_used = measurement_sigma2(O, cfg);
    out.second.sigma2_used = measurement_sigma2(identity, cfg);
    if (cfg.keep_ledger) {
        out.first.ledger.reserve(m);
        out.second.ledger.reserve(m);
        for (std::size_t s = 0; s < m; ++s) {
            out.first.ledger.push_back({s, first[s], second[s], xs_o[s]});
            out.second.ledger.push_back({s, first[s], second[s], xs_1[s]});
        }
    }
    return out;
}

EstimatorReport operator_estimator(const AnsatzSpec& ansatz, const GuidingNet& net,
                                   const PriorGuiding& prior, const PauliSum& O,
                                   const EstimatorConfig& cfg) {
    cfg.validate();
    ansatz.validate();
    prior.validate();
    if (static_cast<std::size_t>(net.input_width()) != ansatz.n_params())
        throw std::invalid_argument("guiding input width does not match the ansatz");
    if (prior.kind == PriorGuiding::Kind::delta_grid) {
        const GridEnsemble ens = grid_ensemble(net, prior);
        const EnsembleCache cache(ansatz, ens.points);
        const EnsembleCache::Gram gram =
            cfg.mode == EstimatorMode::exact ? cache.gram(O) : EnsembleCache::Gram{cache.size(), {}};
        return operator_estimator_cached(cache, ens, O, gram, cfg);
    }
    if (prior.kind != PriorGuiding::Kind::constant_one)
        throw std::invalid_argument("estimator supports grid and continuous priors only");
    // Continuous prior: two independent chains supply the theta and theta'
    // streams; samples are then paired off index by index.
    MHConfig mh;
    mh.seed = derive_seed(cfg.seed, 0);
    const std::vector<double> start(ansatz.n_params(), 0.0);
    const auto thetas = metropolis_chain(net, prior, start, mh, cfg.M);
    mh.seed = derive_seed(cfg.seed, 1);
    const auto theta_primes = metropolis_chain(net, prior, start, mh, cfg.M);
    std::vector<cplx> xs(cfg.M);
    const std::ptrdiff_t mm = static_cast<std::ptrdiff_t>(cfg.M);
#pragma omp parallel for schedule(dynamic) if (mm > 1)
    for (std::ptrdiff_t s = 0; s < mm; ++s) {
        Rng rng(derive_seed(cfg.seed, 2 + static_cast<std::uint64_t>(s)));
        xs[s] = x_quantity(ansatz, net, prior, thetas[s], theta_primes[s], O, cfg, rng);
    }
    EstimatorReport report;
    finalize_report(report, xs);
    report.sigma2_used = measurement_sigma2(O, cfg);
    return report;
}

EstimatorReport estimate_norm(const AnsatzSpec& ansatz, const GuidingNet& net,
                              const PriorGuiding& prior, const EstimatorConfig& cfg) {
    return operator_estimator(ansatz, net, prior, PauliSum::identity(ansatz.n_qubits()), cfg);
}

cplx exact_expectation(const GridEnsemble& ens, const EnsembleCache::Gram& gram) {
    const std::size_t n = ens.points.size();
    if (gram.n != n) throw std::invalid_argument("ensemble and Gram sizes disagree");
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::polar(ens.P[i], ens.gamma[i]);
    cplx acc(0.0);
    for (std::size_t j = 0; j < n; ++j) {
        cplx row(0.0);
        for (std::size_t i = 0; i < n; ++i) row += gram.at(j, i) * v[i];
        acc += std::conj(v[j]) * row;
    }
    return acc;
}

cplx exact_expectation(const AnsatzSpec& ansatz, const GuidingNet& net,
                       const PriorGuiding& prior, const PauliSum& O) {
    if (prior.kind != PriorGuiding::Kind::delta_grid)
        throw std::invalid_argument("brute-force expectation needs a grid prior");
    if (prior.points.size() > 2000)
        throw std::invalid_argument("grid too large to cache statevectors");
    const GridEnsemble ens = grid_ensemble(net, prior);
    const EnsembleCache cache(ansatz, ens.points);
    return exact_expectation(ens, cache.gram(O));
}

void write_ledger_csv(const EstimatorReport& report, const std::string& path,
                      const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open ledger file: " + path);
    if (!header_comment.empty()) out << header_comment;
    out << "sample-index,theta-index,theta-prime-index,re-x,im-x\n";
    char buf[160];
    for (const LedgerRow& row : report.ledger) {
        std::snprintf(buf, sizeof(buf), "%zu,%zu,%zu,%.17g,%.17g\n", row.sample,
                      row.theta_index, row.theta_prime_index, row.x_hat.real(),
                      row.x_hat.imag());
        out << buf;
    }
    if (!out) throw std::runtime_error("failed writing ledger file: " + path);
}

}  // namespace qvmc
