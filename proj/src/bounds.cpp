#include "qvmc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <json.hpp>

#include "qvmc/dense.hpp"
#include "qvmc/mc.hpp"
#include "qvmc/parallel.hpp"
#include "qvmc/rng.hpp"
#include "qvmc/train.hpp"

namespace qvmc {

BoundReport make_report(std::string name, BoundDirection direction, double measured,
                        double bound, std::vector<std::pair<std::string, double>> inputs) {
    BoundReport r;
    r.name = std::move(name);
    r.inputs = std::move(inputs);
    r.direction = direction;
    r.bound = bound;
    r.measured = measured;
    r.margin = direction == BoundDirection::upper ? bound - measured : measured - bound;
    r.satisfied = r.margin >= -kBoundTolerance;
    return r;
}

std::string bound_reports_json(const std::vector<BoundReport>& reports) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const BoundReport& r : reports) {
        nlohmann::ordered_json row;
        row["name"] = r.name;
        nlohmann::ordered_json in = nlohmann::ordered_json::object();
        for (const auto& [k, v] : r.inputs) in[k] = v;
        row["inputs"] = in;
        row["direction"] = r.direction == BoundDirection::upper ? "upper" : "lower";
        if (r.bound_available) {
            row["bound"] = r.bound;
            row["margin"] = r.margin;
        } else {
            row["bound"] = nullptr;
            row["margin"] = nullptr;
        }
        row["measured"] = r.measured;
        row["satisfied"] = r.satisfied;
        row["bound-available"] = r.bound_available;
        arr.push_back(std::move(row));
    }
    return arr.dump(2);
}

void write_bound_reports(const std::string& path, const std::vector<BoundReport>& reports,
                         const std::string& header_comment) {
    nlohmann::ordered_json doc;
    if (!header_comment.empty()) doc["header"] = header_comment;
    doc["reports"] = nlohmann::ordered_json::parse(bound_reports_json(reports));
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << doc.dump(2) << "\n";
}

bool all_satisfied(const std::vector<BoundReport>& reports) {
    return std::all_of(reports.begin(), reports.end(),
                       [](const BoundReport& r) { return r.satisfied; });
}

SampleSizeResult sample_size_bound(double epsilon, double kappa, double operator_norm,
                                   double sigma_o2, double sigma_12, double norm_value) {
    if (!(epsilon > 0.0)) throw std::domain_error("sample size: epsilon must be positive");
    if (!(kappa > 0.0)) throw std::domain_error("sample size: kappa must be positive");
    if (!(operator_norm > 0.0)) throw std::domain_error("sample size: operator norm must be positive");
    if (sigma_o2 < 0.0 || sigma_12 < 0.0)
        throw std::domain_error("sample size: noise variances must be nonnegative");
    if (!(norm_value > 0.0) || norm_value > 1.0)
        throw std::domain_error("sample size: normalization value must lie in (0, 1]");
    SampleSizeResult r;
    r.chi = std::sqrt(operator_norm * operator_norm + sigma_o2) +
            std::sqrt(1.0 + sigma_12) * operator_norm + epsilon * std::sqrt(1.0 + sigma_12);
    const double m = std::ceil(r.chi * r.chi / (kappa * epsilon * epsilon * norm_value * norm_value));
    if (!std::isfinite(m) || m < 0.0 || m > 9.0e18)
        throw std::domain_error("sample size: budget out of integer range");
    r.samples = static_cast<std::uint64_t>(m);
    return r;
}

ProjectionResult projection_state(const PauliSum& hamiltonian, const StateVec& psi0, double tau) {
    if (hamiltonian.n() > 12)
        throw std::invalid_argument("spectral filter: dense decomposition limited to 12 qubits");
    if (psi0.n != hamiltonian.n())
        throw std::invalid_argument("spectral filter: state and operator widths differ");
    if (!(tau >= 0.0)) throw std::domain_error("spectral filter: negative filter time");

    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(dense_matrix(hamiltonian));
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spectral filter: eigendecomposition failed");
    const Eigen::VectorXd& d = es.eigenvalues();  // ascending
    const DenseMatrix& v = es.eigenvectors();
    const Eigen::Index dim = d.size();
    Eigen::VectorXcd c = v.adjoint() * to_eigen(psi0);

    ProjectionResult out;
    out.ground_energy = d(0);
    const double scale = std::max({1.0, std::abs(d(0)), std::abs(d(dim - 1))});
    const double group_tol = 1e-9 * scale;
    for (Eigen::Index l = 0; l < dim; ++l) {
        if (d(l) - out.ground_energy <= group_tol) {
            out.ground_overlap += std::norm(c(l));
        } else {
            out.gap = d(l) - out.ground_energy;
            break;
        }
    }

    Eigen::VectorXcd f = c;
    double num = 0.0;
    for (Eigen::Index l = 0; l < dim; ++l) {
        const double de = d(l) - out.ground_energy;
        f(l) *= std::exp(-0.5 * de * de * tau * tau);
        num += std::norm(f(l)) * d(l);
        out.weight += std::norm(f(l));
    }
    if (out.weight < 1e-300)
        throw std::domain_error("spectral filter: filter annihilated the state");
    out.energy = num / out.weight;
    out.state = from_eigen(v * f, hamiltonian.n(), false);
    return out;
}

double projection_error_bound(double ground_overlap, double gap, double tau) {
    if (!(ground_overlap > 0.0) || ground_overlap > 1.0)
        throw std::domain_error("projection error bound: ground overlap must lie in (0, 1]");
    if (!(tau > 0.0)) throw std::domain_error("projection error bound: filter time must be positive");
    if (gap < 0.0) throw std::domain_error("projection error bound: negative gap");
    const double d = std::max(gap, 1.0 / (std::sqrt(2.0) * tau));
    return (1.0 - ground_overlap) / ground_overlap * std::exp(-d * d * tau * tau) * d;
}

namespace {

// log(2 e^x - 1 - 2x) for x >= 0; direct form until e^x threatens overflow.
double log_bracket(double x) {
    if (x > 500.0) return x + std::log(2.0);  // remainder below double resolution
    if (x > 40.0) return x + std::log(2.0 - (1.0 + 2.0 * x) * std::exp(-x));
    return std::log(2.0 * std::exp(x) - 1.0 - 2.0 * x);
}

}  // namespace

double norm_quadrature(double tau, double h_tot, int trotter_steps) {
    if (trotter_steps < 1)
        throw std::invalid_argument("norm quadrature: trotter depth must be at least 1");
    if (!(tau >= 0.0) || !(h_tot >= 0.0))
        throw std::domain_error("norm quadrature: negative parameters");
    const double a = h_tot * tau / trotter_steps;
    const double nt = static_cast<double>(trotter_steps);
    auto log_f = [a, nt](double u) { return -0.5 * u * u + nt * log_bracket(a * u); };

    // The integrand peaks by u = N_T a, where the Gaussian overtakes the
    // bracket's exponential growth. Locate the peak on a coarse scan, refuse
    // regimes where it overflows, then truncate where the tail falls below
    // 1e-16 of the peak.
    double peak_log = 0.0, peak_u = 0.0;
    const double scan_end = nt * a + 40.0;
    for (double u = 0.0; u <= scan_end; u += 0.25) {
        const double lf = log_f(u);
        if (lf > peak_log) {
            peak_log = lf;
            peak_u = u;
        }
    }
    if (peak_log > 690.0)
        throw std::domain_error("norm quadrature: integrand overflows, parameter regime divergent");
    double cut = peak_u;
    while (log_f(cut) > peak_log - 37.0) cut += 0.25;

    auto f = [&log_f](double u) { return std::exp(log_f(u)); };
    const double half = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, 0.0, cut, 15, 1e-10);
    return 2.0 * half;  // even integrand
}

double norm_quadrature_envelope(double tau, double h_tot, int trotter_steps) {
    const double q = 4.0 * h_tot * h_tot * tau * tau / trotter_steps;
    if (trotter_steps < 1 || !(q < 1.0))
        throw std::domain_error(
            "norm quadrature envelope: requires trotter depth above 4 h_tot^2 tau^2");
    return std::sqrt(2.0 * M_PI / (1.0 - q));
}

double norm_quadrature_inverse(double target, double h_tot, int trotter_steps) {
    const double base = std::sqrt(2.0 * M_PI);
    if (target < base * (1.0 - 1e-12))
        throw std::domain_error("norm quadrature inverse: target below the value at tau = 0");
    if (target <= base * (1.0 + 1e-12)) return 0.0;
    if (!(h_tot > 0.0))
        throw std::domain_error("norm quadrature inverse: target unreachable with h_tot = 0");

    double lo = 0.0, hi = 1.0;
    while (norm_quadrature(hi, h_tot, trotter_steps) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e9)
            throw std::runtime_error("norm quadrature inverse: bracketing failed");
    }
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double c = norm_quadrature(mid, h_tot, trotter_steps);
        if (std::abs(c - target) <= 1e-8 * target) return mid;
        (c < target ? lo : hi) = mid;
        if (hi - lo <= 1e-13 * std::max(1.0, hi)) break;
    }
    return mid;
}

BoundReport norm_lower_bound_check(const PauliSum& hamiltonian, const StateVec& psi0,
                                   double tau, int trotter_steps) {
    const double h_tot = hamiltonian.coeff_one_norm();
    const ProjectionResult pr = projection_state(hamiltonian, psi0, tau);
    const double c = norm_quadrature(tau, h_tot, trotter_steps);
    // Normalization under the analytic one-norm chain C <= tau c(tau) / N_T:
    // the tau sqrt(2 pi) / (C N_T) prefactor squares to 2 pi / c(tau)^2 and
    // the Trotter depth drops out of both sides.
    const double achieved = 2.0 * M_PI * pr.weight / (c * c);
    const double floor = 2.0 * M_PI * pr.ground_overlap / (c * c);
    return make_report("norm-lower-bound", BoundDirection::lower, achieved, floor,
                       {{"tau", tau},
                        {"trotter-steps", static_cast<double>(trotter_steps)},
                        {"h-tot", h_tot},
                        {"ground-overlap", pr.ground_overlap},
                        {"c-tau", c},
                        {"filter-weight", pr.weight}});
}

std::vector<ErrorCostPoint> error_cost_curve(double ground_overlap, double gap, double h_tot,
                                             int trotter_steps,
                                             const std::vector<double>& x_grid) {
    if (!(ground_overlap > 0.0) || ground_overlap > 1.0)
        throw std::domain_error("error-cost curve: ground overlap must lie in (0, 1]");
    std::vector<ErrorCostPoint> out;
    out.reserve(x_grid.size());
    for (const double x : x_grid) {
        if (!(x > 0.0) || x > 1.0)
            throw std::domain_error("error-cost curve: feasibility floor must lie in (0, 1]");
        const double target = std::sqrt(2.0 * M_PI * ground_overlap / x);
        ErrorCostPoint p;
        p.x = x;
        p.tau = norm_quadrature_inverse(target, h_tot, trotter_steps);
        if (p.tau > 0.0) {
            p.bound = projection_error_bound(ground_overlap, gap, p.tau);
        } else {
            p.bound_available = false;  // no finite closed form at tau = 0
        }
        out.push_back(p);
    }
    return out;
}

DepthResult required_depth(double epsilon, double x, double ground_overlap, double gap,
                           double h_tot) {
    if (!(epsilon > 0.0)) throw std::domain_error("required depth: epsilon must be positive");
    if (!(ground_overlap > 0.0) || ground_overlap > 1.0)
        throw std::domain_error("required depth: ground overlap must lie in (0, 1]");
    if (!(x > 0.0) || x >= ground_overlap)
        throw std::domain_error("required depth: feasibility floor must satisfy 0 < x < p_g");
    if (!(gap > 0.0)) throw std::domain_error("required depth: gap must be positive");
    if (!(h_tot > 0.0)) throw std::domain_error("required depth: h_tot must be positive");

    const double ratio = (1.0 - ground_overlap) * gap / ground_overlap;
    DepthResult r;
    if (epsilon > ratio / std::sqrt(M_E)) {
        r.tau = (1.0 - ground_overlap) / (std::sqrt(2.0 * M_E) * ground_overlap * epsilon);
    } else {
        r.tau = std::sqrt(std::log(ratio / epsilon)) / gap;
    }
    const double steps = std::ceil(4.0 * h_tot * h_tot * r.tau * r.tau / (1.0 - x / ground_overlap) -
                                   1e-12);
    r.trotter_steps = static_cast<std::uint64_t>(std::max(0.0, steps));
    return r;
}

namespace {

// Gauss-Legendre nodes/weights on [-1, 1], expanded from the nonnegative
// zeros of the Legendre polynomial.
void legendre_rule(int n, std::vector<double>& x, std::vector<double>& w) {
    x.clear();
    w.clear();
    const auto zeros = boost::math::legendre_p_zeros<double>(n);
    for (const double z : zeros) {
        const double dp = boost::math::legendre_p_prime(n, z);
        const double wt = 2.0 / ((1.0 - z * z) * dp * dp);
        if (z == 0.0) {
            x.push_back(0.0);
            w.push_back(wt);
        } else {
            x.push_back(-z);
            w.push_back(wt);
            x.push_back(z);
            w.push_back(wt);
        }
    }
    std::vector<std::size_t> order(x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> xs(x.size()), ws(w.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        xs[i] = x[order[i]];
        ws[i] = w[order[i]];
    }
    x = std::move(xs);
    w = std::move(ws);
}

}  // namespace

SmoothedStateResult smoothed_state_distance(const AnsatzSpec& ansatz, const GuidingNet& net,
                                            const std::vector<double>& theta0, double tau,
                                            const SmoothedGrid& grid) {
    ansatz.validate();
    const std::size_t k = ansatz.n_params();
    if (theta0.size() != k)
        throw std::invalid_argument("smoothed state: theta0 width does not match the ansatz");
    if (net.input_width() != static_cast<int>(k))
        throw std::invalid_argument("smoothed state: net width does not match the ansatz");
    if (!(tau > 0.0)) throw std::domain_error("smoothed state: tau must be positive");
    if (grid.panels < 2 || grid.panels % 2 != 0)
        throw std::invalid_argument(
            "smoothed state: panel count must be even so a boundary sits on the |u| kink");
    if (grid.nodes_per_panel < 2 || !(grid.half_width > 0.0))
        throw std::invalid_argument("smoothed state: degenerate quadrature grid");

    const double cover1 = 1.0 - std::exp(-grid.half_width);
    const double coverage = std::pow(cover1, static_cast<double>(k));
    if (coverage < 0.999)
        throw std::domain_error("smoothed state: grid too coarse, covers " +
                                std::to_string(coverage) + " of the smoothing mass");

    std::vector<double> gx, gw;
    legendre_rule(grid.nodes_per_panel, gx, gw);
    const double panel_width = 2.0 * grid.half_width / grid.panels;
    std::vector<double> un, wn;
    un.reserve(static_cast<std::size_t>(grid.panels) * gx.size());
    wn.reserve(un.capacity());
    for (int p = 0; p < grid.panels; ++p) {
        const double left = -grid.half_width + p * panel_width;
        for (std::size_t q = 0; q < gx.size(); ++q) {
            un.push_back(left + 0.5 * panel_width * (gx[q] + 1.0));
            wn.push_back(0.5 * panel_width * gw[q]);
        }
    }
    const std::size_t nd = un.size();
    const double total_real = std::pow(static_cast<double>(nd), static_cast<double>(k));
    if (total_real > 2.0e8)
        throw std::invalid_argument("smoothed state: product grid too large");
    const std::size_t total = static_cast<std::size_t>(std::llround(total_real));

    const StateVec ref = prepare(ansatz, theta0);
    const std::size_t dim = ref.dim();
    const double jac = std::pow(tau, -static_cast<double>(k));

    const auto blocks = par::fixed_blocks(total);
    std::vector<std::vector<cplx>> partial(blocks.size(), std::vector<cplx>(dim, cplx{}));
#pragma omp parallel for schedule(dynamic)
    for (long long b = 0; b < static_cast<long long>(blocks.size()); ++b) {
        std::vector<cplx>& acc = partial[b];
        CircuitParams th(k);
        for (std::size_t idx = blocks[b].begin; idx < blocks[b].end; ++idx) {
            std::size_t rem = idx;
            double wt = 1.0;
            for (std::size_t d = 0; d < k; ++d) {
                const std::size_t q = rem % nd;
                rem /= nd;
                th[d] = theta0[d] + un[q] / tau;
                wt *= wn[q];
            }
            const GuidingNet::Output o = net.forward(th);
            const cplx coef =
                wt * jac * w_value(net.w_choice(), o.A) * std::polar(1.0, o.B);
            const StateVec phi = prepare(ansatz, th);
            for (std::size_t i = 0; i < dim; ++i) acc[i] += coef * phi.amps[i];
        }
    }
    std::vector<cplx> psi(dim, cplx{});
    for (const auto& pb : partial)
        for (std::size_t i = 0; i < dim; ++i) psi[i] += pb[i];

    double n2 = 0.0;
    cplx ov{};
    for (std::size_t i = 0; i < dim; ++i) {
        n2 += std::norm(psi[i]);
        ov += std::conj(ref.amps[i]) * psi[i];
    }

    SmoothedStateResult r;
    r.norm_value = n2;
    r.distance = std::sqrt(std::max(0.0, n2 + 1.0 - 2.0 * ov.real()));
    r.mass_coverage = coverage;
    r.lipschitz = std::sqrt(static_cast<double>(k));
    r.bound = static_cast<double>(k) * r.lipschitz / tau;
    return r;
}

bool feasible_set_nesting_check(const std::vector<double>& norm_values, double x1, double x2) {
    for (const double v : norm_values)
        if (v >= x2 && v < x1) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Default verification suite
// ---------------------------------------------------------------------------

namespace {

struct TwoVertexFixture {
    PauliSum h;        // normalized
    double scale = 0;  // original spectral norm
    StateVec psi01;    // one excitation on qubit 0
    SpectrumReport spectrum;
    double pg = 0.0;
};

TwoVertexFixture two_vertex_fixture() {
    TwoVertexFixture f;
    const InteractionGraph g = make_graph(2, {{0, 1}});
    auto [hn, scale] = normalize_spectral(heisenberg(g, 1.0));
    f.h = std::move(hn);
    f.scale = scale;
    f.psi01 = StateVec::basis(2, 1);
    f.spectrum = exact_spectrum(f.h);
    f.pg = overlap_pg(f.psi01, f.spectrum);
    return f;
}

// Localized ensemble on the two-vertex model: full Hamiltonian ansatz at
// depth 2 (7 parameters), uniform grid in a narrow box, guiding weights
// concentrated at the box center. Shared by the coverage and interval checks.
struct EnsembleFixture {
    AnsatzSpec spec;
    PriorGuiding prior;
    GuidingNet net;
};

EnsembleFixture ensemble_fixture(const TwoVertexFixture& f, std::uint64_t seed) {
    EnsembleFixture e;
    e.spec.kind = AnsatzKind::full_ha;
    e.spec.graph = make_graph(2, {{0, 1}});
    e.spec.terms = f.h;
    e.spec.n_trotter = 2;
    e.spec.init = InitState::pairwise_singlet;
    const std::size_t k = e.spec.n_params();
    e.prior = uniform_grid_prior(k, 60, -0.3, 0.3, derive_seed(seed, 101));
    e.net = delta_approx_params(std::vector<double>(k, 0.0), 5.0);
    return e;
}

std::vector<BoundReport> check_sample_size_coverage(std::uint64_t seed) {
    const TwoVertexFixture f = two_vertex_fixture();
    const EnsembleFixture e = ensemble_fixture(f, seed);
    const GridEnsemble ens = grid_ensemble(e.net, e.prior);
    const EnsembleCache cache(e.spec, e.prior.points);
    const auto gram_h = cache.gram(f.h);
    const auto gram_1 = cache.gram(PauliSum::identity(f.h.n()));

    const double norm_value = exact_expectation(ens, gram_1).real();
    const double exact_ratio = exact_expectation(ens, gram_h).real() / norm_value;
    const double epsilon = 0.2, kappa = 0.05;
    const SampleSizeResult budget =
        sample_size_bound(epsilon, kappa, 1.0, 0.0, 0.0, norm_value);

    const std::uint64_t trials = 1000;
    std::uint64_t failures = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        EstimatorConfig ec;
        ec.M = budget.samples;
        ec.mode = EstimatorMode::exact;
        ec.seed = derive_seed(seed, 5000 + t);
        const auto [rh, r1] = paired_estimates(cache, ens, f.h, gram_h, gram_1, ec);
        const double ratio = rh.estimate.real() / r1.estimate.real();
        if (std::abs(ratio - exact_ratio) > epsilon) ++failures;
    }
    const double rate = static_cast<double>(failures) / static_cast<double>(trials);
    const double binom =
        3.0 * std::sqrt(2.0 * kappa * (1.0 - 2.0 * kappa) / static_cast<double>(trials));
    return {make_report("sample-size-coverage", BoundDirection::upper, rate, 2.0 * kappa + binom,
                        {{"epsilon", epsilon},
                         {"kappa", kappa},
                         {"pair-samples", static_cast<double>(budget.samples)},
                         {"trials", static_cast<double>(trials)},
                         {"norm-value", norm_value},
                         {"exact-ratio", exact_ratio}})};
}

std::vector<BoundReport> check_regularized_interval(std::uint64_t seed) {
    const TwoVertexFixture f = two_vertex_fixture();
    const EnsembleFixture e = ensemble_fixture(f, seed);
    const GridLossEvaluator eval(e.spec, e.prior, f.h);

    LossConfig lc;
    lc.kind = LossKind::regularized;
    lc.evaluation = LossConfig::Evaluation::deterministic;
    lc.kappa = 0.05;
    lc.estimator.M = 500;
    lc.estimator.mode = EstimatorMode::exact;
    const LossValue lv = eval.value(e.net, lc, LossStage::full, 0);

    const double shift = eval.energy_shift(lc);
    const double shifted_ratio = lv.raw_ratio - shift;  // <= 0 for the shifted operator
    const RegularizerEtas etas =
        regularizer_etas(eval.shifted_spectral_norm(), 0.0, 0.0, lc.kappa, lc.estimator.M);
    const double upper =
        shifted_ratio +
        2.0 * (etas.eta_h + eval.shifted_spectral_norm() * etas.eta_one) / lv.norm;
    const double lower = std::min(shifted_ratio, 0.0);
    const std::vector<std::pair<std::string, double>> inputs = {
        {"pair-samples", 500.0}, {"kappa", lc.kappa},          {"eta-h", etas.eta_h},
        {"eta-one", etas.eta_one}, {"shifted-ratio", shifted_ratio}, {"norm-value", lv.norm}};
    return {make_report("regularized-loss-lower", BoundDirection::lower, lv.loss, lower, inputs),
            make_report("regularized-loss-upper", BoundDirection::upper, lv.loss, upper, inputs)};
}

std::vector<BoundReport> check_projection_error(std::uint64_t) {
    const TwoVertexFixture f = two_vertex_fixture();
    std::vector<BoundReport> out;
    for (const double tau : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        const ProjectionResult pr = projection_state(f.h, f.psi01, tau);
        const double measured = pr.energy - pr.ground_energy;
        const double bound = projection_error_bound(pr.ground_overlap, pr.gap, tau);
        out.push_back(make_report("projection-error", BoundDirection::upper, measured, bound,
                                  {{"tau", tau},
                                   {"ground-overlap", pr.ground_overlap},
                                   {"gap", pr.gap}}));
    }
    return out;
}

std::vector<BoundReport> check_norm_lower_bound(std::uint64_t) {
    const TwoVertexFixture f = two_vertex_fixture();
    return {norm_lower_bound_check(f.h, f.psi01, 1.0, 10)};
}

std::vector<BoundReport> check_norm_quadrature_envelope(std::uint64_t) {
    const double tau = 1.0, h_tot = 1.0;
    const int steps = 10;
    return {make_report("norm-quadrature-envelope", BoundDirection::upper,
                        norm_quadrature(tau, h_tot, steps),
                        norm_quadrature_envelope(tau, h_tot, steps),
                        {{"tau", tau},
                         {"h-tot", h_tot},
                         {"trotter-steps", static_cast<double>(steps)}})};
}

std::vector<BoundReport> check_norm_quadrature_roundtrip(std::uint64_t) {
    const double target = 1.2 * std::sqrt(2.0 * M_PI);
    const double tau = norm_quadrature_inverse(target, 1.0, 8);
    const double residual = std::abs(norm_quadrature(tau, 1.0, 8) - target) / target;
    return {make_report("norm-quadrature-roundtrip", BoundDirection::upper, residual, 1e-8,
                        {{"target", target}, {"tau", tau}})};
}

std::vector<BoundReport> check_projection_time_floor(std::uint64_t) {
    const double pg = 0.5, h_tot = 1.0, x = 0.25;
    const int steps = 16;
    const double tau =
        norm_quadrature_inverse(std::sqrt(2.0 * M_PI * pg / x), h_tot, steps);
    const double floor = std::sqrt(steps * (1.0 - x / pg)) / (2.0 * h_tot);
    return {make_report("projection-time-floor", BoundDirection::lower, tau, floor,
                        {{"ground-overlap", pg},
                         {"x", x},
                         {"h-tot", h_tot},
                         {"trotter-steps", static_cast<double>(steps)}})};
}

std::vector<BoundReport> check_error_cost_monotone(std::uint64_t) {
    const TwoVertexFixture f = two_vertex_fixture();
    const std::vector<double> xs = {0.45, 0.40, 0.35, 0.30, 0.25, 0.20, 0.15, 0.10, 0.05};
    const auto curve = error_cost_curve(f.pg, f.spectrum.gap, f.h.coeff_one_norm(), 16, xs);
    double worst = -1e300;  // largest increase along decreasing x
    for (std::size_t i = 0; i + 1 < curve.size(); ++i)
        worst = std::max(worst, curve[i + 1].bound - curve[i].bound);
    return {make_report("error-cost-monotone", BoundDirection::upper, worst, 0.0,
                        {{"ground-overlap", f.pg},
                         {"gap", f.spectrum.gap},
                         {"points", static_cast<double>(curve.size())}})};
}

std::vector<BoundReport> check_depth_composition(std::uint64_t) {
    const TwoVertexFixture f = two_vertex_fixture();
    const double epsilon = 0.5, x = 0.25;
    const double h_tot = f.h.coeff_one_norm();
    const DepthResult dr = required_depth(epsilon, x, f.pg, f.spectrum.gap, h_tot);
    const auto curve = error_cost_curve(f.pg, f.spectrum.gap, h_tot,
                                        static_cast<int>(dr.trotter_steps), {x});
    return {make_report("depth-composition", BoundDirection::upper, curve.front().bound, epsilon,
                        {{"epsilon", epsilon},
                         {"x", x},
                         {"tau", dr.tau},
                         {"trotter-steps", static_cast<double>(dr.trotter_steps)}})};
}

std::vector<BoundReport> check_smoothed_state(std::uint64_t) {
    PauliSum mixer(1);
    mixer.add(0.5, PauliString::single(1, 0, Pauli::X));
    mixer.add(0.5, PauliString::single(1, 0, Pauli::Z));
    AnsatzSpec spec;
    spec.kind = AnsatzKind::full_ha;
    spec.terms = mixer;
    spec.n_trotter = 1;
    spec.init = InitState::all_zero;
    const std::vector<double> theta0 = {0.2, 0.3, 0.4};

    std::vector<BoundReport> out;
    for (const double tau : {20.0, 50.0, 100.0}) {
        const GuidingNet net = delta_approx_params(theta0, tau);
        const SmoothedStateResult r = smoothed_state_distance(spec, net, theta0, tau);
        // Truncating 0.1% of the smoothing mass perturbs the state by at most
        // ~1e-3 in norm; fold that into the distance ceiling.
        const double slack = 1e-3;
        out.push_back(make_report("smoothed-state-distance", BoundDirection::upper, r.distance,
                                  r.bound + slack,
                                  {{"tau", tau},
                                   {"lipschitz", r.lipschitz},
                                   {"mass-coverage", r.mass_coverage},
                                   {"quadrature-slack", slack}}));
        const double norm_floor = (1.0 - r.bound) * (1.0 - r.bound) - slack;
        out.push_back(make_report("smoothed-state-norm", BoundDirection::lower, r.norm_value,
                                  norm_floor,
                                  {{"tau", tau},
                                   {"lipschitz", r.lipschitz},
                                   {"mass-coverage", r.mass_coverage},
                                   {"quadrature-slack", slack}}));
    }
    return out;
}

std::vector<BoundReport> check_feasible_set_nesting(std::uint64_t seed) {
    Rng rng(derive_seed(seed, 777));
    std::vector<double> vals(100);
    for (double& v : vals) v = rng.uniform();
    const bool ok =
        feasible_set_nesting_check(vals, 0.1, 0.9) && feasible_set_nesting_check(vals, 0.5, 0.5);
    return {make_report("feasible-set-nesting", BoundDirection::upper, ok ? 0.0 : 1.0, 0.0,
                        {{"x1", 0.1}, {"x2", 0.9}, {"samples", 100.0}})};
}

struct SuiteCheck {
    std::vector<std::string> names;  // report names this check can emit
    std::vector<BoundReport> (*run)(std::uint64_t seed);
};

}  // namespace

std::vector<BoundReport> default_verification_suite(const std::string& filter,
                                                    std::uint64_t seed) {
    const std::vector<SuiteCheck> checks = {
        {{"sample-size-coverage"}, &check_sample_size_coverage},
        {{"regularized-loss-lower", "regularized-loss-upper"}, &check_regularized_interval},
        {{"projection-error"}, &check_projection_error},
        {{"norm-lower-bound"}, &check_norm_lower_bound},
        {{"norm-quadrature-envelope"}, &check_norm_quadrature_envelope},
        {{"norm-quadrature-roundtrip"}, &check_norm_quadrature_roundtrip},
        {{"projection-time-floor"}, &check_projection_time_floor},
        {{"error-cost-monotone"}, &check_error_cost_monotone},
        {{"depth-composition"}, &check_depth_composition},
        {{"smoothed-state-distance", "smoothed-state-norm"}, &check_smoothed_state},
        {{"feasible-set-nesting"}, &check_feasible_set_nesting},
    };

    std::vector<const SuiteCheck*> selected;
    for (const SuiteCheck& c : checks) {
        const bool match = filter.empty() ||
                           std::any_of(c.names.begin(), c.names.end(), [&filter](const auto& n) {
                               return n.find(filter) != std::string::npos;
                           });
        if (match) selected.push_back(&c);
    }

    // Checks are pure and independent; aggregation order is the declaration
    // order above regardless of how the loop is scheduled.
    std::vector<std::vector<BoundReport>> results(selected.size());
    std::vector<std::exception_ptr> errors(selected.size());
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(selected.size()); ++i) {
        try {
            results[i] = selected[i]->run(seed);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<BoundReport> out;
    for (auto& group : results)
        for (BoundReport& r : group)
            if (filter.empty() || r.name.find(filter) != std::string::npos)
                out.push_back(std::move(r));
    return out;
}

}  // namespace qvmc
