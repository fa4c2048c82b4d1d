#include "qvmc/guiding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "qvmc/rng.hpp"

namespace qvmc {

using nlohmann::json;

double w_value(WChoice w, double A) {
    switch (w) {
        case WChoice::abs_val: return std::abs(A);
        case WChoice::exp_neg: return std::exp(-A);
        case WChoice::gauss: return std::exp(-0.5 * A * A);
    }
    throw std::logic_error("w_value: bad choice");
}

double w_derivative(WChoice w, double A) {
    switch (w) {
        case WChoice::abs_val: return A > 0 ? 1.0 : (A < 0 ? -1.0 : 0.0);
        case WChoice::exp_neg: return -std::exp(-A);
        case WChoice::gauss: return -A * std::exp(-0.5 * A * A);
    }
    throw std::logic_error("w_derivative: bad choice");
}

const char* w_choice_name(WChoice w) {
    switch (w) {
        case WChoice::abs_val: return "abs";
        case WChoice::exp_neg: return "exp-neg";
        case WChoice::gauss: return "gauss";
    }
    return "?";
}

WChoice w_choice_from_name(const std::string& name) {
    if (name == "abs") return WChoice::abs_val;
    if (name == "exp-neg") return WChoice::exp_neg;
    if (name == "gauss") return WChoice::gauss;
    throw std::invalid_argument("unknown W choice: " + name);
}

// ---------------------------------------------------------------------------
// Flat-parameter layout helpers

struct NetLayout {
    std::vector<std::size_t> w_off, b_off;  // per hidden layer
    std::size_t wa_off = 0, ba_off = 0, wb_off = 0, bb_off = 0;
    std::size_t total = 0;

    explicit NetLayout(const GuidingNet& net) {
        std::size_t off = 0;
        int in = net.input_;
        for (int width : net.hidden_) {
            w_off.push_back(off);
            off += static_cast<std::size_t>(width) * in;
            b_off.push_back(off);
            off += width;
            in = width;
        }
        const std::size_t last = net.hidden_.empty() ? net.input_ : net.hidden_.back();
        wa_off = off;
        off += last;
        ba_off = off++;
        wb_off = off;
        off += last;
        bb_off = off++;
        total = off;
    }
};

GuidingNet::GuidingNet(int input_width, std::vector<int> hidden_widths, WChoice w_choice)
    : input_(input_width), hidden_(std::move(hidden_widths)), w_(w_choice) {
    if (input_ <= 0) throw std::invalid_argument("GuidingNet: input width must be positive");
    for (int h : hidden_)
        if (h <= 0) throw std::invalid_argument("GuidingNet: hidden width must be positive");
    params_.assign(NetLayout(*this).total, 0.0);
}

void GuidingNet::init_random(std::uint64_t seed) {
    const NetLayout lay(*this);
    std::fill(params_.begin(), params_.end(), 0.0);
    Rng rng(seed);
    int in = input_;
    for (std::size_t l = 0; l < hidden_.size(); ++l) {
        const int out = hidden_[l];
        const double r = std::sqrt(6.0 / (in + out));
        for (std::size_t k = 0; k < static_cast<std::size_t>(out) * in; ++k)
            params_[lay.w_off[l] + k] = rng.uniform(-r, r);
        // biases stay zero
        in = out;
    }
    // output heads stay zero: alpha starts constant over the grid
}

GuidingNet::Output GuidingNet::forward(std::span<const double> theta) const {
    thread_local Workspace ws;
    return forward_cached(theta, ws);
}

GuidingNet::Output GuidingNet::forward_cached(std::span<const double> theta,
                                              Workspace& ws) const {
    if (static_cast<int>(theta.size()) != input_)
        throw std::invalid_argument("GuidingNet::forward: input width mismatch");
    const NetLayout lay(*this);
    ws.pre.resize(hidden_.size());
    ws.act.resize(hidden_.size());

    const double* cur = theta.data();
    int in = input_;
    for (std::size_t l = 0; l < hidden_.size(); ++l) {
        const int out = hidden_[l];
        ws.pre[l].resize(out);
        ws.act[l].resize(out);
        const double* W = params_.data() + lay.w_off[l];
        const double* b = params_.data() + lay.b_off[l];
        for (int o = 0; o < out; ++o) {
            double z = b[o];
            const double* row = W + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) z += row[i] * cur[i];
            ws.pre[l][o] = z;
            ws.act[l][o] = z > 0.0 ? z : 0.0;
        }
        cur = ws.act[l].data();
        in = out;
    }

    const double* wa = params_.data() + lay.wa_off;
    const double* wb = params_.data() + lay.wb_off;
    double A = params_[lay.ba_off];
    double B = params_[lay.bb_off];
    for (int i = 0; i < in; ++i) {
        A += wa[i] * cur[i];
        B += wb[i] * cur[i];
    }
    return {A, B};
}

void GuidingNet::backward(std::span<const double> theta, Workspace& ws, double gA,
                          double gB, std::span<double> grad) const {
    const NetLayout lay(*this);
    if (grad.size() != lay.total)
        throw std::invalid_argument("GuidingNet::backward: gradient length mismatch");

    const std::size_t L = hidden_.size();
    const double* last_act = L == 0 ? theta.data() : ws.act[L - 1].data();
    const int last_w = L == 0 ? input_ : hidden_[L - 1];

    // Output heads.
    for (int i = 0; i < last_w; ++i) {
        grad[lay.wa_off + i] += gA * last_act[i];
        grad[lay.wb_off + i] += gB * last_act[i];
    }
    grad[lay.ba_off] += gA;
    grad[lay.bb_off] += gB;

    if (L == 0) return;

    // Seed the hidden-layer deltas from both heads.
    auto& delta = ws.delta;
    delta.resize(L);
    delta[L - 1].assign(last_w, 0.0);
    const double* wa = params_.data() + lay.wa_off;
    const double* wb = params_.data() + lay.wb_off;
    for (int o = 0; o < last_w; ++o)
        if (ws.pre[L - 1][o] > 0.0) delta[L - 1][o] = gA * wa[o] + gB * wb[o];

    for (std::size_t l = L; l-- > 0;) {
        const int out = hidden_[l];
        const int in = l == 0 ? input_ : hidden_[l - 1];
        const double* below = l == 0 ? theta.data() : ws.act[l - 1].data();
        double* gW = grad.data() + lay.w_off[l];
        double* gb = grad.data() + lay.b_off[l];
        for (int o = 0; o < out; ++o) {
            const double d = delta[l][o];
            if (d == 0.0) continue;
            double* row = gW + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) row[i] += d * below[i];
            gb[o] += d;
        }
        if (l == 0) break;
        delta[l - 1].assign(in, 0.0);
        const double* W = params_.data() + lay.w_off[l];
        for (int o = 0; o < out; ++o) {
            const double d = delta[l][o];
            if (d == 0.0) continue;
            const double* row = W + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) delta[l - 1][i] += d * row[i];
        }
        for (int i = 0; i < in; ++i)
            if (ws.pre[l - 1][i] <= 0.0) delta[l - 1][i] = 0.0;
    }
}

std::span<double> GuidingNet::layer_weights(std::size_t layer) {
    const NetLayout lay(*this);
    const int in = layer == 0 ? input_ : hidden_[layer - 1];
    return {params_.data() + lay.w_off[layer],
            static_cast<std::size_t>(hidden_[layer]) * in};
}

std::span<double> GuidingNet::layer_biases(std::size_t layer) {
    const NetLayout lay(*this);
    return {params_.data() + lay.b_off[layer], static_cast<std::size_t>(hidden_[layer])};
}

std::span<double> GuidingNet::head_A_weights() {
    const NetLayout lay(*this);
    const std::size_t last = hidden_.empty() ? input_ : hidden_.back();
    return {params_.data() + lay.wa_off, last};
}

std::span<double> GuidingNet::head_B_weights() {
    const NetLayout lay(*this);
    const std::size_t last = hidden_.empty() ? input_ : hidden_.back();
    return {params_.data() + lay.wb_off, last};
}

double& GuidingNet::head_A_bias() { return params_[NetLayout(*this).ba_off]; }
double& GuidingNet::head_B_bias() { return params_[NetLayout(*this).bb_off]; }

// ---------------------------------------------------------------------------
// Priors and ensembles

void PriorGuiding::validate() const {
    if (kind == Kind::delta_grid) {
        if (points.empty()) throw std::invalid_argument("prior: delta grid has no points");
        if (weights.size() != points.size())
            throw std::invalid_argument("prior: weight/point count mismatch");
        for (std::size_t i = 0; i + 1 < points.size(); ++i)
            for (std::size_t j = i + 1; j < points.size(); ++j)
                if (points[i] == points[j])
                    throw std::invalid_argument("prior: duplicate grid points");
    }
    if (kind == Kind::evolution_series && k_max < 2)
        throw std::invalid_argument("prior: series truncation must be >= 2");
}

PriorGuiding uniform_grid_prior(std::size_t K, std::size_t n_points, double box_min,
                                double box_max, std::uint64_t seed) {
    if (box_max <= box_min) throw std::invalid_argument("prior: empty box");
    PriorGuiding prior;
    prior.kind = PriorGuiding::Kind::delta_grid;
    prior.seed = seed;
    prior.box_min = box_min;
    prior.box_max = box_max;
    Rng rng(seed);
    prior.points.reserve(n_points);
    for (std::size_t p = 0; p < n_points; ++p) {
        std::vector<double> pt(K);
        for (std::size_t k = 0; k < K; ++k) pt[k] = rng.uniform(box_min, box_max);
        prior.points.push_back(std::move(pt));
    }
    prior.weights.assign(n_points, cplx{1.0});
    return prior;
}

PriorGuiding constant_prior() {
    PriorGuiding prior;
    prior.kind = PriorGuiding::Kind::constant_one;
    return prior;
}

namespace {

cplx alpha_bare(const GuidingNet& net, std::span<const double> theta) {
    const auto out = net.forward(theta);
    return std::polar(w_value(net.w_choice(), out.A), out.B);
}

}  // namespace

cplx alpha(const GuidingNet& net, const PriorGuiding& prior, std::span<const double> theta) {
    switch (prior.kind) {
        case PriorGuiding::Kind::constant_one:
            return alpha_bare(net, theta);
        case PriorGuiding::Kind::delta_grid: {
            for (std::size_t i = 0; i < prior.points.size(); ++i) {
                if (std::equal(theta.begin(), theta.end(), prior.points[i].begin(),
                               prior.points[i].end()))
                    return alpha_bare(net, theta) * prior.weights[i];
            }
            throw std::invalid_argument("alpha: theta is not a delta-grid support point");
        }
        case PriorGuiding::Kind::evolution_series:
            throw std::invalid_argument(
                "alpha: the series prior is only evaluated by its verification routine");
    }
    throw std::logic_error("alpha: bad prior kind");
}

ScaledWeights scaled_weights(WChoice choice, std::span<const double> A) {
    ScaledWeights out;
    const std::size_t n = A.size();
    out.w.resize(n);
    out.dw.resize(n);
    if (choice == WChoice::abs_val) {
        for (std::size_t i = 0; i < n; ++i) {
            out.w[i] = std::abs(A[i]);
            out.dw[i] = w_derivative(choice, A[i]);
        }
        return out;
    }
    // Exponential family: W = exp(g) with g = -A or -A^2/2; dividing out the
    // largest exp(g) keeps every weight in (0, 1].
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double g = choice == WChoice::exp_neg ? -A[i] : -0.5 * A[i] * A[i];
        peak = std::max(peak, g);
    }
    out.log_scale = peak;
    for (std::size_t i = 0; i < n; ++i) {
        const double g = choice == WChoice::exp_neg ? -A[i] : -0.5 * A[i] * A[i];
        out.w[i] = std::exp(g - peak);
        out.dw[i] = choice == WChoice::exp_neg ? -out.w[i] : -A[i] * out.w[i];
    }
    return out;
}

GridEnsemble grid_ensemble(const GuidingNet& net, const PriorGuiding& prior) {
    if (prior.kind != PriorGuiding::Kind::delta_grid)
        throw std::invalid_argument("grid_ensemble: delta-grid prior required");
    prior.validate();
    GridEnsemble ens;
    ens.points = prior.points;
    const std::size_t N = prior.points.size();
    ens.alpha.resize(N);
    ens.P.resize(N);
    ens.gamma.resize(N);
    std::vector<double> a_head(N), b_head(N);
    for (std::size_t i = 0; i < N; ++i) {
        const GuidingNet::Output out = net.forward(prior.points[i]);
        a_head[i] = out.A;
        b_head[i] = out.B;
    }
    const ScaledWeights sw = scaled_weights(net.w_choice(), a_head);
    ens.log_scale = sw.log_scale;
    for (std::size_t i = 0; i < N; ++i)
        ens.alpha[i] = sw.w[i] * std::polar(1.0, b_head[i]) * prior.weights[i];
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += std::abs(ens.alpha[i]);
    if (!(s > 0.0)) throw std::domain_error("grid_ensemble: all guiding values vanish");
    ens.C = sw.log_scale == 0.0 ? s : std::exp(sw.log_scale + std::log(s));
    for (std::size_t i = 0; i < N; ++i) {
        ens.P[i] = std::abs(ens.alpha[i]) / s;
        ens.gamma[i] = std::arg(ens.alpha[i]);
    }
    return ens;
}

// ---------------------------------------------------------------------------
// Analytic parameter constructions

GuidingNet delta_approx_params(const std::vector<double>& theta0, double tau) {
    if (tau <= 0.0) throw std::invalid_argument("delta_approx_params: tau must be positive");
    const int K = static_cast<int>(theta0.size());
    if (K == 0) throw std::invalid_argument("delta_approx_params: empty center");
    GuidingNet net(K, {2 * K}, WChoice::exp_neg);

    // Hidden pair (2i, 2i+1) computes ReLU(+(theta_i - c_i)) and
    // ReLU(-(theta_i - c_i)); their sum is |theta_i - c_i|.
    auto W = net.layer_weights(0);
    auto b = net.layer_biases(0);
    for (int i = 0; i < K; ++i) {
        W[static_cast<std::size_t>(2 * i) * K + i] = 1.0;
        W[static_cast<std::size_t>(2 * i + 1) * K + i] = -1.0;
        b[2 * i] = -theta0[i];
        b[2 * i + 1] = theta0[i];
    }
    auto wa = net.head_A_weights();
    for (auto& v : wa) v = tau;
    net.head_A_bias() = K * std::log(2.0 / tau);
    return net;
}

GuidingNet projection_params(double ground_energy, double tau, int n_trotter, int input_width) {
    if (tau <= 0.0) throw std::invalid_argument("projection_params: tau must be positive");
    if (input_width < 1) throw std::invalid_argument("projection_params: bad input width");
    GuidingNet net(input_width, {2}, WChoice::gauss);
    // h_0 = ReLU(N_T t), h_1 = ReLU(-N_T t): h_0 + h_1 = N_T |t|,
    // h_0 - h_1 = N_T t.
    auto W = net.layer_weights(0);
    W[0] = static_cast<double>(n_trotter);
    W[static_cast<std::size_t>(input_width)] = -static_cast<double>(n_trotter);
    auto wa = net.head_A_weights();
    wa[0] = 1.0 / tau;
    wa[1] = 1.0 / tau;
    auto wb = net.head_B_weights();
    wb[0] = ground_energy;
    wb[1] = -ground_energy;
    return net;
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {

json prior_to_json(const PriorGuiding& prior) {
    json j;
    switch (prior.kind) {
        case PriorGuiding::Kind::constant_one: j["variant"] = "constant-one"; break;
        case PriorGuiding::Kind::delta_grid: j["variant"] = "delta-grid"; break;
        case PriorGuiding::Kind::evolution_series: j["variant"] = "evolution-series"; break;
    }
    if (prior.kind == PriorGuiding::Kind::delta_grid) {
        j["seed"] = prior.seed;
        j["box_min"] = prior.box_min;
        j["box_max"] = prior.box_max;
        j["points"] = prior.points;
        json w = json::array();
        for (const auto& c : prior.weights) w.push_back({c.real(), c.imag()});
        j["weights"] = std::move(w);
    }
    if (prior.kind == PriorGuiding::Kind::evolution_series) j["k_max"] = prior.k_max;
    return j;
}

PriorGuiding prior_from_json(const json& j) {
    PriorGuiding prior;
    const std::string variant = j.at("variant");
    if (variant == "constant-one") {
        prior.kind = PriorGuiding::Kind::constant_one;
    } else if (variant == "delta-grid") {
        prior.kind = PriorGuiding::Kind::delta_grid;
        prior.seed = j.at("seed");
        prior.box_min = j.at("box_min");
        prior.box_max = j.at("box_max");
        prior.points = j.at("points").get<std::vector<std::vector<double>>>();
        for (const auto& w : j.at("weights"))
            prior.weights.emplace_back(w.at(0).get<double>(), w.at(1).get<double>());
    } else if (variant == "evolution-series") {
        prior.kind = PriorGuiding::Kind::evolution_series;
        prior.k_max = j.at("k_max");
    } else {
        throw std::invalid_argument("checkpoint: unknown prior variant " + variant);
    }
    return prior;
}

}  // namespace

void save_checkpoint(const GuidingNet& net, const PriorGuiding& prior, std::uint64_t seed,
                     const std::string& path) {
    json j;
    j["input_width"] = net.input_width();
    j["hidden"] = net.hidden_widths();
    j["w_choice"] = w_choice_name(net.w_choice());
    j["params"] = net.params();
    j["prior"] = prior_to_json(prior);
    j["seed"] = seed;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << j.dump(2) << "\n";
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    json j;
    in >> j;
    Checkpoint ck;
    ck.net = GuidingNet(j.at("input_width"), j.at("hidden").get<std::vector<int>>(),
                        w_choice_from_name(j.at("w_choice")));
    ck.net.params() = j.at("params").get<std::vector<double>>();
    if (ck.net.params().size() != NetLayout(ck.net).total)
        throw std::runtime_error("checkpoint: parameter count mismatch");
    ck.prior = prior_from_json(j.at("prior"));
    ck.seed = j.at("seed");
    return ck;
}

}  // namespace qvmc
