#include "qvmc/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "qvmc/model.hpp"
#include "qvmc/parallel.hpp"
#include "qvmc/rng.hpp"

namespace qvmc {

namespace {

constexpr double kDivideFaultTol = 1e-12;
constexpr int kStage1Streak = 3;
constexpr std::size_t kMonotoneWindow = 50;
constexpr double kMonotoneTol = 1e-9;
constexpr double kFdStep = 1e-3;
// Gradient accumulation runs over this many fixed grid-point blocks; each
// block owns a buffer and the buffers are combined in block order, so the
// result is bit-identical for any worker count.
constexpr std::size_t kGradBlocks = 16;

double elapsed_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void LossConfig::validate() const {
    if (kind == LossKind::barrier || kind == LossKind::raw) {
        if (!(barrier_y > 0.0) || !(barrier_z > 0.0))
            throw std::invalid_argument("barrier parameters y and z must be positive");
    }
    if (kind == LossKind::regularized) {
        if (!(kappa > 0.0) || !(kappa < 0.5))
            throw std::invalid_argument("regularizer kappa must lie in (0, 1/2)");
    }
    estimator.validate();
}

double barrier_term(double norm_value, double x, double y, double z) {
    if (!(y > 0.0)) throw std::invalid_argument("barrier width y must be positive");
    return -z * std::tanh((norm_value - x) / y);
}

RegularizerEtas regularizer_etas(double spectral_norm, double sigma_h2, double sigma_12,
                                 double kappa, std::uint64_t m) {
    const double km = kappa * static_cast<double>(m);
    return {std::sqrt((spectral_norm * spectral_norm + sigma_h2) / km),
            std::sqrt((1.0 + sigma_12) / km)};
}

// ---------------------------------------------------------------------------
// Grid loss evaluator

struct GridLossEvaluator::GridPass {
    std::vector<double> A, B;
    std::vector<double> wp;      // W'(A_i) under the common weight rescale
    std::vector<cplx> alpha;     // rescaled by exp(-log_scale); the loss and
                                 // its gradient are invariant under the scale
    std::vector<cplx> u_h, u_1;  // Gram-matrix products against alpha
    double s = 0.0;              // sum_i |alpha_i|
    double qh = 0.0;             // alpha^dag G_H alpha, original units
    double q1 = 0.0;             // alpha^dag G_1 alpha
};

namespace {

std::vector<cplx> gram_matvec(const EnsembleCache::Gram& g, const std::vector<cplx>& v) {
    std::vector<cplx> out(g.n);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(g.n);
#pragma omp parallel for schedule(static) if (n >= 256)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        cplx acc(0.0);
        for (std::size_t i = 0; i < g.n; ++i) acc += g.at(static_cast<std::size_t>(j), i) * v[i];
        out[j] = acc;
    }
    return out;
}

const std::vector<std::vector<double>>& checked_grid_points(const PriorGuiding& prior) {
    prior.validate();
    if (prior.kind != PriorGuiding::Kind::delta_grid)
        throw std::invalid_argument("grid loss evaluation needs a delta-grid prior");
    return prior.points;
}

}  // namespace

GridLossEvaluator::GridLossEvaluator(AnsatzSpec ansatz, PriorGuiding prior, PauliSum h)
    : ansatz_(std::move(ansatz)),
      prior_(std::move(prior)),
      h_(std::move(h)),
      cache_(ansatz_, checked_grid_points(prior_)) {
    if (h_.n() != ansatz_.n_qubits())
        throw std::invalid_argument("Hamiltonian and ansatz qubit counts disagree");
    h_norm_ = spectral_norm(h_);
    h_shifted_ = h_.shifted(h_norm_);
    h_shifted_norm_ = spectral_norm(h_shifted_);
    gram_h_ = cache_.gram(h_);
    gram_1_ = cache_.gram(PauliSum::identity(h_.n()));
    gram_h_shifted_.n = gram_h_.n;
    gram_h_shifted_.a.resize(gram_h_.a.size());
    for (std::size_t k = 0; k < gram_h_.a.size(); ++k)
        gram_h_shifted_.a[k] = gram_h_.a[k] - h_norm_ * gram_1_.a[k];
}

double GridLossEvaluator::energy_shift(const LossConfig& cfg) const {
    return cfg.kind == LossKind::regularized ? h_norm_ : 0.0;
}

GridLossEvaluator::GridPass GridLossEvaluator::deterministic_pass(const GuidingNet& net) const {
    const std::size_t n = cache_.size();
    GridPass p;
    p.A.resize(n);
    p.B.resize(n);
    p.alpha.resize(n);
    const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (nn > 1)
    for (std::ptrdiff_t i = 0; i < nn; ++i) {
        const GuidingNet::Output out = net.forward(cache_.points()[i]);
        p.A[i] = out.A;
        p.B[i] = out.B;
    }
    ScaledWeights sw = scaled_weights(net.w_choice(), p.A);
    p.wp = std::move(sw.dw);
    for (std::size_t i = 0; i < n; ++i)
        p.alpha[i] = sw.w[i] * std::polar(1.0, p.B[i]) * prior_.weights[i];
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(p.alpha[i]);
    if (!(s > 0.0))
        throw std::domain_error("guiding function vanishes on the entire grid");
    p.s = s;
    p.u_h = gram_matvec(gram_h_, p.alpha);
    p.u_1 = gram_matvec(gram_1_, p.alpha);
    cplx qh(0.0), q1(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        qh += std::conj(p.alpha[i]) * p.u_h[i];
        q1 += std::conj(p.alpha[i]) * p.u_1[i];
    }
    p.qh = qh.real();
    p.q1 = q1.real();
    return p;
}

namespace {

// Assembles the objective from the two estimates. `h_eff_hat` is the
// estimate of the operator actually evaluated: the shifted Hamiltonian under
// the regularized loss (shift > 0), the original one otherwise.
LossValue objective_from_estimates(double h_eff_hat, double one_hat, LossStage stage,
                                   const LossConfig& cfg, double shift, double shifted_norm,
                                   double sigma_h2, double sigma_12) {
    LossValue v;
    v.energy = h_eff_hat + shift * one_hat;
    v.norm = one_hat;
    const bool ratio_ok = std::abs(one_hat) > kDivideFaultTol;
    v.raw_ratio = ratio_ok ? v.energy / one_hat : std::numeric_limits<double>::quiet_NaN();
    if (stage == LossStage::barrier_only) {
        v.loss = barrier_term(one_hat, cfg.barrier_x, cfg.barrier_y, cfg.barrier_z);
        return v;
    }
    switch (cfg.kind) {
        case LossKind::raw:
            v.loss = v.raw_ratio;
            v.denominator_fault = !ratio_ok;
            break;
        case LossKind::barrier:
            v.loss = v.raw_ratio +
                     barrier_term(one_hat, cfg.barrier_x, cfg.barrier_y, cfg.barrier_z);
            v.denominator_fault = !ratio_ok;
            break;
        case LossKind::regularized: {
            const RegularizerEtas etas =
                regularizer_etas(shifted_norm, sigma_h2, sigma_12, cfg.kappa, cfg.estimator.M);
            const double denom = one_hat + etas.eta_one;
            if (denom <= 0.0) {
                v.denominator_fault = true;
                v.loss = std::numeric_limits<double>::quiet_NaN();
            } else {
                v.loss = (h_eff_hat + etas.eta_h) / denom;
            }
            break;
        }
    }
    return v;
}

}  // namespace

LossValue GridLossEvaluator::value(const GuidingNet& net, const LossConfig& cfg,
                                   LossStage stage, std::uint64_t eval_index) const {
    cfg.validate();
    const bool shift_on = cfg.kind == LossKind::regularized && stage == LossStage::full;
    const double shift = shift_on ? h_norm_ : 0.0;
    if (cfg.evaluation == LossConfig::Evaluation::deterministic) {
        const GridPass p = deterministic_pass(net);
        const double s2 = p.s * p.s;
        const double qh_eff = shift_on ? p.qh - shift * p.q1 : p.qh;
        return objective_from_estimates(qh_eff / s2, p.q1 / s2, stage, cfg, shift,
                                        h_shifted_norm_, 0.0, 0.0);
    }
    const GridEnsemble ens = grid_ensemble(net, prior_);
    EstimatorConfig ec = cfg.estimator;
    ec.seed = derive_seed(cfg.estimator.seed, eval_index);
    ec.keep_ledger = false;
    const PauliSum& o_eff = shift_on ? h_shifted_ : h_;
    const EnsembleCache::Gram& gram_eff = shift_on ? gram_h_shifted_ : gram_h_;
    const auto [rep_o, rep_1] = paired_estimates(cache_, ens, o_eff, gram_eff, gram_1_, ec);
    return objective_from_estimates(rep_o.estimate.real(), rep_1.estimate.real(), stage, cfg,
                                    shift, h_shifted_norm_, rep_o.sigma2_used,
                                    rep_1.sigma2_used);
}

std::vector<double> GridLossEvaluator::gradient(const GuidingNet& net, const LossConfig& cfg,
                                                LossStage stage,
                                                std::uint64_t eval_index) const {
    cfg.validate();
    std::vector<double> grad(net.param_count(), 0.0);
    if (cfg.evaluation == LossConfig::Evaluation::sampled) {
        // Central differences with common random numbers: both sides of every
        // coordinate reuse this eval_index, so they see identical sampling
        // noise and the difference isolates the parameter effect.
        GuidingNet probe = net;
        for (std::size_t k = 0; k < grad.size(); ++k) {
            const double saved = probe.params()[k];
            probe.params()[k] = saved + kFdStep;
            const double up = value(probe, cfg, stage, eval_index).loss;
            probe.params()[k] = saved - kFdStep;
            const double down = value(probe, cfg, stage, eval_index).loss;
            probe.params()[k] = saved;
            if (!std::isfinite(up) || !std::isfinite(down))
                throw std::domain_error("loss not finite during finite-difference gradient");
            grad[k] = (up - down) / (2.0 * kFdStep);
        }
        return grad;
    }

    const GridPass p = deterministic_pass(net);
    const std::size_t n = cache_.size();
    const double s2 = p.s * p.s;
    const double s3 = s2 * p.s;
    const double one_hat = p.q1 / s2;
    const bool shift_on = cfg.kind == LossKind::regularized && stage == LossStage::full;
    const double shift = shift_on ? h_norm_ : 0.0;

    // Objective derivatives with respect to (qh, q1, s), qh in original
    // units.
    double c_qh = 0.0, c_q1 = 0.0, c_s = 0.0;
    const auto add_barrier_seeds = [&] {
        const double t = std::tanh((one_hat - cfg.barrier_x) / cfg.barrier_y);
        const double gate = cfg.barrier_z / cfg.barrier_y * (1.0 - t * t);
        c_q1 += -gate / s2;
        c_s += 2.0 * gate * p.q1 / s3;
    };
    const auto add_ratio_seeds = [&] {
        if (std::abs(one_hat) <= kDivideFaultTol)
            throw std::domain_error("loss not finite: vanishing normalization estimate");
        c_qh += 1.0 / p.q1;
        c_q1 += -p.qh / (p.q1 * p.q1);
    };
    if (stage == LossStage::barrier_only) {
        add_barrier_seeds();
    } else {
        switch (cfg.kind) {
            case LossKind::raw:
                add_ratio_seeds();
                break;
            case LossKind::barrier:
                add_ratio_seeds();
                add_barrier_seeds();
                break;
            case LossKind::regularized: {
                const RegularizerEtas etas = regularizer_etas(h_shifted_norm_, 0.0, 0.0,
                                                              cfg.kappa, cfg.estimator.M);
                const double qh_s = p.qh - shift * p.q1;
                const double nu = qh_s / s2 + etas.eta_h;
                const double den = one_hat + etas.eta_one;
                if (den <= 0.0)
                    throw std::domain_error("loss not finite: regularized denominator <= 0");
                c_qh += 1.0 / (s2 * den);
                c_q1 += -shift / (s2 * den) - nu / (s2 * den * den);
                c_s += -2.0 * qh_s / (s3 * den) + 2.0 * p.q1 * nu / (s3 * den * den);
                break;
            }
        }
    }

    // Per-point seed pair for one backward pass each: the loss reaches A_i
    // through both |alpha_i| (modulus) and the bilinears, and B_i through the
    // phase of alpha_i.
    std::vector<double> g_a(n), g_b(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double wp = p.wp[i];
        const cplx d_i = wp * std::polar(1.0, p.B[i]) * prior_.weights[i];
        const double dqh_da = 2.0 * (std::conj(d_i) * p.u_h[i]).real();
        const double dq1_da = 2.0 * (std::conj(d_i) * p.u_1[i]).real();
        const double ds_da = wp * std::abs(prior_.weights[i]);
        const double dqh_db = 2.0 * (std::conj(p.alpha[i]) * p.u_h[i]).imag();
        const double dq1_db = 2.0 * (std::conj(p.alpha[i]) * p.u_1[i]).imag();
        g_a[i] = c_qh * dqh_da + c_q1 * dq1_da + c_s * ds_da;
        g_b[i] = c_qh * dqh_db + c_q1 * dq1_db;
    }

    const std::size_t blocks = std::min(kGradBlocks, n);
    std::vector<std::vector<double>> partial(blocks,
                                             std::vector<double>(net.param_count(), 0.0));
    const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(dynamic) if (nb > 1)
    for (std::ptrdiff_t b = 0; b < nb; ++b) {
        GuidingNet::Workspace ws;
        const std::size_t lo = static_cast<std::size_t>(b) * n / blocks;
        const std::size_t hi = (static_cast<std::size_t>(b) + 1) * n / blocks;
        for (std::size_t i = lo; i < hi; ++i) {
            net.forward_cached(cache_.points()[i], ws);
            net.backward(cache_.points()[i], ws, g_a[i], g_b[i], partial[b]);
        }
    }
    for (std::size_t b = 0; b < blocks; ++b)
        for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += partial[b][k];
    return grad;
}

// ---------------------------------------------------------------------------
// Adam

AdamState::AdamState(std::size_t n_params, AdamConfig config)
    : cfg(config), m(n_params, 0.0), v(n_params, 0.0) {}

void AdamState::apply(std::span<double> params, std::span<const double> grad) {
    if (params.size() != m.size() || grad.size() != m.size())
        throw std::invalid_argument("optimizer state and parameter shapes disagree");
    ++step;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
    for (std::size_t k = 0; k < m.size(); ++k) {
        m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * grad[k];
        v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * grad[k] * grad[k];
        const double m_hat = m[k] / bc1;
        const double v_hat = v[k] / bc2;
        params[k] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
}

// ---------------------------------------------------------------------------
// Two-stage protocol

TrainResult two_stage_train(const GridLossEvaluator& eval, GuidingNet net,
                            const LossConfig& loss, const AdamConfig& adam,
                            const TrainBudget& budget) {
    loss.validate();
    if (budget.stage1_max == 0) throw std::invalid_argument("stage-1 budget must be positive");
    const auto t0 = std::chrono::steady_clock::now();
    TrainResult res;
    std::uint64_t global_it = 0;

    const auto record = [&](TrainTrace& trace, int stage, const LossValue& v,
                            std::uint64_t idx) {
        trace.rows.push_back(
            {idx, stage, v.loss, v.energy, v.norm, elapsed_since(t0)});
    };

    // Numeric breakdown inside an evaluation (vanishing guiding function,
    // vanishing normalization) is a training failure, not a caller error:
    // surface it as a non-finite loss so the fault paths below stop the run.
    const auto guarded_value = [&](const GuidingNet& current, LossStage stage,
                                   std::uint64_t idx) {
        try {
            return eval.value(current, loss, stage, idx);
        } catch (const std::domain_error&) {
            LossValue v;
            v.loss = v.energy = v.norm = v.raw_ratio = std::numeric_limits<double>::quiet_NaN();
            v.denominator_fault = true;
            return v;
        }
    };

    // Stage 1: climb the normalization barrier.
    AdamState opt1(net.param_count(), adam);
    int streak = 0;
    LossValue last;
    for (std::uint64_t it = 0; it < budget.stage1_max; ++it) {
        const std::uint64_t idx = global_it++;
        last = guarded_value(net, LossStage::barrier_only, idx);
        record(res.trace, 1, last, idx);
        if (!std::isfinite(last.loss)) {
            res.loss_fault = true;
            res.stage1_iterations = it + 1;
            res.net = std::move(net);
            res.final_value = last;
            res.adam = std::move(opt1);
            return res;
        }
        streak = last.norm > loss.barrier_x ? streak + 1 : 0;
        if (streak >= kStage1Streak) {
            res.stage1_crossed = true;
            res.stage1_iterations = it + 1;
            break;
        }
        try {
            opt1.apply(net.params(), eval.gradient(net, loss, LossStage::barrier_only, idx));
        } catch (const std::domain_error&) {
            res.loss_fault = true;
            res.stage1_iterations = it + 1;
            res.net = std::move(net);
            res.final_value = last;
            res.adam = std::move(opt1);
            return res;
        }
    }
    if (!res.stage1_crossed) {
        res.stage1_iterations = budget.stage1_max;
        res.net = std::move(net);
        res.final_value = last;
        res.adam = std::move(opt1);
        return res;
    }

    // Stage 2: minimize the configured objective from the stage-1 point with
    // a fresh optimizer state.
    AdamState opt2(net.param_count(), adam);
    std::vector<double> stage2_losses;
    stage2_losses.reserve(budget.stage2_iterations + 1);
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t since_best = 0;
    for (std::uint64_t it = 0; it < budget.stage2_iterations; ++it) {
        const std::uint64_t idx = global_it++;
        const LossValue v = guarded_value(net, LossStage::full, idx);
        record(res.trace, 2, v, idx);
        if (v.denominator_fault || !std::isfinite(v.loss)) {
            res.loss_fault = true;
            res.net = std::move(net);
            res.final_value = v;
            res.adam = std::move(opt2);
            return res;
        }
        stage2_losses.push_back(v.loss);
        if (v.loss < best - budget.patience_tol) {
            best = v.loss;
            since_best = 0;
        } else if (budget.patience > 0 && ++since_best >= budget.patience) {
            break;
        }
        try {
            opt2.apply(net.params(), eval.gradient(net, loss, LossStage::full, idx));
        } catch (const std::domain_error&) {
            res.loss_fault = true;
            res.net = std::move(net);
            res.final_value = v;
            res.adam = std::move(opt2);
            return res;
        }
    }
    const std::uint64_t idx = global_it++;
    const LossValue v = guarded_value(net, LossStage::full, idx);
    record(res.trace, 2, v, idx);
    stage2_losses.push_back(v.loss);
    res.loss_fault = v.denominator_fault || !std::isfinite(v.loss);
    res.final_value = v;
    res.net = std::move(net);
    res.adam = std::move(opt2);
    if (loss.evaluation == LossConfig::Evaluation::deterministic) {
        for (std::size_t t = 0; t + kMonotoneWindow < stage2_losses.size(); ++t) {
            if (stage2_losses[t + kMonotoneWindow] > stage2_losses[t] + kMonotoneTol) {
                res.monotone_ok = false;
                break;
            }
        }
    }
    return res;
}

std::vector<SweepRow> barrier_sweep(const GridLossEvaluator& eval, const SweepSettings& s) {
    if (s.x_values.empty()) throw std::invalid_argument("sweep needs at least one x value");
    if (s.repeats < 1) throw std::invalid_argument("sweep needs at least one repeat");
    if (s.init == SweepInit::delta_center) {
        if (s.delta_tau <= 0.0) throw std::invalid_argument("sweep delta tau must be positive");
        if (s.jitter < 0.0) throw std::invalid_argument("sweep jitter must be non-negative");
        if (!s.delta_center.empty() && s.delta_center.size() != eval.ansatz().n_params())
            throw std::invalid_argument("sweep delta center length must match parameter count");
    }
    s.loss.validate();
    const auto make_net = [&](std::uint64_t seed) {
        if (s.init == SweepInit::random_net) {
            GuidingNet net(static_cast<int>(eval.ansatz().n_params()), s.hidden, s.w_choice);
            net.init_random(seed);
            return net;
        }
        const std::vector<double> center =
            s.delta_center.empty() ? std::vector<double>(eval.ansatz().n_params(), 0.0)
                                   : s.delta_center;
        GuidingNet net = delta_approx_params(center, s.delta_tau);
        Rng r(seed);
        for (double& p : net.params()) p += s.jitter * r.normal();
        return net;
    };
    const std::size_t total = s.x_values.size() * s.repeats;
    std::vector<SweepRow> rows(total);
    const std::ptrdiff_t nt = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(dynamic) if (nt > 1)
    for (std::ptrdiff_t row = 0; row < nt; ++row) {
        const std::size_t xi = static_cast<std::size_t>(row) / s.repeats;
        const std::uint64_t repeat = static_cast<std::uint64_t>(row) % s.repeats;
        const std::uint64_t seed = derive_seed(s.root_seed, static_cast<std::uint64_t>(row));
        SweepRow& out = rows[row];
        out.x = s.x_values[xi];
        out.repeat = repeat;
        out.seed = seed;
        LossConfig lc = s.loss;
        lc.barrier_x = out.x;
        lc.estimator.seed = seed;
        GuidingNet net = make_net(seed);
        try {
            const TrainResult t = two_stage_train(eval, std::move(net), lc, s.adam, s.budget);
            out.final_energy = t.final_value.raw_ratio;
            out.final_norm = t.final_value.norm;
            out.final_loss = t.final_value.loss;
            out.stage1_crossed = t.stage1_crossed;
            out.stage1_iterations = t.stage1_iterations;
            out.monotone_ok = t.monotone_ok && !t.loss_fault;
        } catch (const std::exception&) {
            out.final_energy = std::numeric_limits<double>::quiet_NaN();
            out.final_norm = std::numeric_limits<double>::quiet_NaN();
            out.final_loss = std::numeric_limits<double>::quiet_NaN();
            out.stage1_crossed = false;
            out.monotone_ok = false;
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Exports

void write_trace_csv(const TrainTrace& trace, const std::string& path,
                     const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open trace file: " + path);
    if (!header_comment.empty()) out << header_comment;
    out << "iteration,stage,loss,energy-estimate,norm-estimate,elapsed-seconds\n";
    char buf[200];
    for (const TraceRow& r : trace.rows) {
        std::snprintf(buf, sizeof(buf), "%llu,%d,%.17g,%.17g,%.17g,%.6f\n",
                      static_cast<unsigned long long>(r.iteration), r.stage, r.loss, r.energy,
                      r.norm, r.elapsed_seconds);
        out << buf;
    }
    if (!out) throw std::runtime_error("failed writing trace file: " + path);
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path,
                     const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open sweep file: " + path);
    if (!header_comment.empty()) out << header_comment;
    out << "x,repeat,seed,final-energy,final-norm,final-loss,stage1-crossed,"
           "stage1-iterations,monotone-ok\n";
    char buf[260];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%llu,%llu,%.17g,%.17g,%.17g,%d,%llu,%d\n", r.x,
                      static_cast<unsigned long long>(r.repeat),
                      static_cast<unsigned long long>(r.seed), r.final_energy, r.final_norm,
                      r.final_loss, r.stage1_crossed ? 1 : 0,
                      static_cast<unsigned long long>(r.stage1_iterations),
                      r.monotone_ok ? 1 : 0);
        out << buf;
    }
    if (!out) throw std::runtime_error("failed writing sweep file: " + path);
}

void save_train_checkpoint(const GuidingNet& net, const PriorGuiding& prior,
                           std::uint64_t seed, const AdamState& adam,
                           const std::string& path) {
    save_checkpoint(net, prior, seed, path);
    std::ifstream in(path);
    nlohmann::json j = nlohmann::json::parse(in);
    in.close();
    j["adam"] = {{"step", adam.step},
                 {"lr", adam.cfg.lr},
                 {"beta1", adam.cfg.beta1},
                 {"beta2", adam.cfg.beta2},
                 {"epsilon", adam.cfg.epsilon},
                 {"m", adam.m},
                 {"v", adam.v}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open checkpoint file: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace qvmc
