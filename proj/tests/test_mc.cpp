#include <doctest.h>

#include <qvmc/circuits.hpp>
#include <qvmc/guiding.hpp>
#include <qvmc/mc.hpp>
#include <qvmc/model.hpp>
#include <qvmc/parallel.hpp>
#include <qvmc/rng.hpp>

#include <omp.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

using namespace qvmc;

namespace {

constexpr double kTwoPi = 6.283185307179586;

AnsatzSpec two_vertex_spec() {
    AnsatzSpec spec;
    spec.kind = AnsatzKind::simplified_ha;
    spec.graph = make_graph(2, {{0, 1}});
    spec.n_trotter = 2;
    spec.init = InitState::pairwise_singlet;
    return spec;
}

PauliSum two_vertex_h() {
    return normalize_spectral(heisenberg(make_graph(2, {{0, 1}}), 1.0)).first;
}

GuidingNet seeded_net(int n_params, std::uint64_t seed, WChoice w = WChoice::exp_neg) {
    GuidingNet net(n_params, {8, 8}, w);
    net.init_random(seed);
    // Nonzero heads so P and gamma are not uniform.
    Rng r(derive_seed(seed, 99));
    for (auto& v : net.head_A_weights()) v = 0.4 * r.normal();
    for (auto& v : net.head_B_weights()) v = 0.4 * r.normal();
    return net;
}

}  // namespace

TEST_CASE("sample_pair draws valid indices reproducibly") {
    const AnsatzSpec spec = two_vertex_spec();
    const PriorGuiding prior = uniform_grid_prior(spec.n_params(), 12, 0.0, kTwoPi, 5);
    const GuidingNet net = seeded_net(static_cast<int>(spec.n_params()), 21);
    const GridEnsemble ens = grid_ensemble(net, prior);

    Rng a(77), b(77);
    for (int s = 0; s < 50; ++s) {
        const auto [i, j] = sample_pair(ens, a);
        const auto [i2, j2] = sample_pair(ens, b);
        CHECK(i < ens.points.size());
        CHECK(j < ens.points.size());
        CHECK(i == i2);
        CHECK(j == j2);
    }
}

TEST_CASE("exact expectation routes agree and identity lies in [0, 1]") {
    const AnsatzSpec spec = two_vertex_spec();
    const PauliSum h = two_vertex_h();
    const PriorGuiding prior = uniform_grid_prior(spec.n_params(), 10, 0.0, kTwoPi, 6);
    const GuidingNet net = seeded_net(static_cast<int>(spec.n_params()), 3);
    const GridEnsemble ens = grid_ensemble(net, prior);
    EnsembleCache cache(spec, prior.points);

    const cplx via_cache = exact_expectation(ens, cache.gram(h));
    const cplx via_ansatz = exact_expectation(spec, net, prior, h);
    CHECK(std::abs(via_cache - via_ansatz) < 1e-12);

    const cplx one = exact_expectation(ens, cache.gram(PauliSum::identity(2)));
    CHECK(std::abs(one.imag()) < 1e-12);
    CHECK(one.real() >= 0.0);
    CHECK(one.real() <= 1.0 + 1e-12);
}

TEST_CASE("ensemble cache Gram matrices are Hermitian with unit diagonal for the identity") {
    const AnsatzSpec spec = two_vertex_spec();
    const PriorGuiding prior = uniform_grid_prior(spec.n_params(), 7, 0.0, kTwoPi, 8);
    EnsembleCache cache(spec, prior.points);
    const auto g1 = cache.gram(PauliSum::identity(2));
    const auto gh = cache.gram(two_vertex_h());
    for (std::size_t i = 0; i < cache.size(); ++i) {
        CHECK(std::abs(g1.at(i, i) - cplx(1.0, 0.0)) < 1e-12);
        for (std::size_t j = 0; j < cache.size(); ++j) {
            CHECK(std::abs(g1.at(j, i) - std::conj(g1.at(i, j))) < 1e-12);
            CHECK(std::abs(gh.at(j, i) - std::conj(gh.at(i, j))) < 1e-12);
        }
    }
}

TEST_CASE("x_quantity at theta = theta' with the identity is exactly one") {
    const AnsatzSpec spec = two_vertex_spec();
    const PriorGuiding prior = constant_prior();
    const GuidingNet net = seeded_net(static_cast<int>(spec.n_params()), 17);
    EstimatorConfig cfg;
    cfg.mode = EstimatorMode::exact;
    Rng rng(1);
    const std::vector<double> theta = {0.8, 2.1};
    const cplx x = x_quantity(spec, net, prior, theta, theta, PauliSum::identity(2), cfg, rng);
    CHECK(std::abs(x - cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("exact-mode estimator converges to the double-sum oracle") {
    const AnsatzSpec spec = two_vertex_spec();
    const PauliSum h = two_vertex_h();
    const PriorGuiding prior = uniform_grid_prior(spec.n_params(), 15, 0.0, kTwoPi, 11);
    const GuidingNet net = seeded_net(static_cast<int>(spec.n_params()), 29);

    const cplx oracle = exact_expectation(spec, net, prior, h);
    EstimatorConfig cfg;
    cfg.M = 4000;
    cfg.mode = EstimatorMode::exact;
    cfg.seed = 1234;
    const EstimatorReport rep = operator_estimator(spec, net, prior, h, cfg);
    CHECK(rep.samples == 4000);
    const double stderr_est = std::sqrt(rep.empirical_variance / static_cast<double>(cfg.M));
    CHECK(std::abs(rep.estimate - oracle) < 4.0 * stderr_est + 1e-12);
}

TEST_CASE("shot-noise estimator is unbiased within sampling error") {
    const AnsatzSpec spec = two_vertex_spec();
    const PauliSum h = two_vertex_h();
    const PriorGuiding prior = uniform_grid_prior(spec.n_params(), 8, 0.0, kTwoPi, 13);
    const GuidingNet net = seeded_net(static_cast<int>(spec.n_params()), 31);
    const double oracle = exact_expectation(spec, net, prior, h).real();

    EstimatorConfig cfg;
    cfg.M = 16;
    cfg.M_Q = 2;
    cfg.mode = EstimatorMode::shot_noise;
    cfg.protocol = MeasureProtocol::two_part;

    const int repeats = 400;
    double mean = 0.0, m2 = 0.0;
    for (int r = 0; r < repeats; ++r) {
        cfg.seed = derive_seed(555, static_cast<std::uint64_t>(r));
        const double v = operator_estimator(spec, net, prior, h, cfg).estimate.real();
        const double d = v - mean;
        mean += d / (r + 1);
        m2 += d * (v - mean);
    }
    const double se = std::sqrt(m2 / (repeats - 1) / repeats);
    CHECK(std::abs(mean - oracle) < 5.0 * se + 1e-12);
}

TEST_CASE("estimator variance respects the one-norm bound") {
    const AnsatzSpec spec = two_vertex_spec();
    const PauliSum h = two_vertex_h();
    const PriorGuiding prior = uniform_grid_prior(spec.n_params(), 10, 0.0, kTwoPi, 17);
    const GuidingNet net = seeded_net(static_cast<int>(spec.n_params()), 37);
    const double c_o = h.coeff_one_norm();

    for (const EstimatorMode mode : {EstimatorMode::exact, EstimatorMode::shot_noise}) {
        EstimatorConfig cfg;
        cfg.M = 10;
        cfg.M_Q = 1;
        cfg.mode = mode;
        cfg.protocol = MeasureProtocol::two_part;
        const double sigma2 = measurement_sigma2(h, cfg);
        const double cap = (c_o * c_o + sigma2) / static_cast<double>(cfg.M);

        const int repeats = 300;
        double mean = 0.0, m2 = 0.0;
        for (int r = 0; r < repeats; ++r) {
            cfg.seed = derive_seed(777, static_cast<std::uint64_t>(r));
            const double v = operator_estimator(spec, net, prior, h, cfg).estimate.real();
            const double d = v - mean;
            mean += d / (r + 1);
            m2 += d * (v - mean);
        }
        const double var = m2 / (repeats - 1);
        // The observed estimator variance may fluctuate around its true
        // value; the bound itself is loose enough that a 20% cushion never
        // triggers falsely.
        CHECK(var <= 1.2 * cap);
    }
}

TEST_CASE("measurement-noise constants per protocol") {
    EstimatorConfig cfg;
    cfg.mode = EstimatorMode::exact;
    const PauliSum h = two_vertex_h();
    CHECK(measurement_sigma2(h, cfg) == 0.0);

    cfg.mode = EstimatorMode::shot_noise;
    cfg.M_Q = 4;

    // Single unit-coefficient Hermitian word: auto-select uses the one-part
    // protocol with constant 1 / M_Q.
    PauliSum word(2);
    word.add(1.0, PauliString::from_word("XX"));
    cfg.protocol = MeasureProtocol::auto_select;
    CHECK(measurement_sigma2(word, cfg) == doctest::Approx(0.25).epsilon(1e-12));
    cfg.protocol = MeasureProtocol::real_part_only;
    CHECK(measurement_sigma2(word, cfg) == doctest::Approx(0.25).epsilon(1e-12));

    // General decomposition: 2 C_O^2 / M_Q.
    const double c = h.coeff_one_norm();
    cfg.protocol = MeasureProtocol::two_part;
    CHECK(measurement_sigma2(h, cfg) == doctest::Approx(2.0 * c * c / 4.0).epsilon(1e-12));
    cfg.protocol = MeasureProtocol::auto_select;
    CHECK(measurement_sigma2(h, cfg) == doctest::Approx(2.0 * c * c / 4.0).epsilon(1e-12));
}

TEST_CASE("estimator results do not depend on the worker count") {
    const AnsatzSpec spec = two_vertex_spec();
    const PauliSum h = two_vertex_h();
    const PriorGuiding prior = uniform_grid_prior(spec.n_params(), 9, 0.0, kTwoPi, 19);
    const GuidingNet net = seeded_net(static_cast<int>(spec.n_params()), 41);

    EstimatorConfig cfg;
    cfg.M = 200;
    cfg.mode = EstimatorMode::shot_noise;
    cfg.M_Q = 3;
    cfg.seed = 4242;

    const int saved = par::worker_count();
    omp_set_num_threads(1);
    const EstimatorReport serial = operator_estimator(spec, net, prior, h, cfg);
    omp_set_num_threads(4);
    const EstimatorReport wide = operator_estimator(spec, net, prior, h, cfg);
    omp_set_num_threads(saved);

    CHECK(serial.estimate.real() == wide.estimate.real());
    CHECK(serial.estimate.imag() == wide.estimate.imag());
    CHECK(serial.empirical_variance == wide.empirical_variance);
}

TEST_CASE("paired estimates share their pair draws") {
    const AnsatzSpec spec = two_vertex_spec();
    const PauliSum h = two_vertex_h();
    const PriorGuiding prior = uniform_grid_prior(spec.n_params(), 11, 0.0, kTwoPi, 23);
    const GuidingNet net = seeded_net(static_cast<int>(spec.n_params()), 43);
    const GridEnsemble ens = grid_ensemble(net, prior);
    EnsembleCache cache(spec, prior.points);
    const auto gram_h = cache.gram(h);
    const auto gram_1 = cache.gram(PauliSum::identity(2));

    EstimatorConfig cfg;
    cfg.M = 64;
    cfg.mode = EstimatorMode::exact;
    cfg.seed = 909;
    cfg.keep_ledger = true;
    const auto [rep_h, rep_1] = paired_estimates(cache, ens, h, gram_h, gram_1, cfg);
    REQUIRE(rep_h.ledger.size() == 64);
    REQUIRE(rep_1.ledger.size() == 64);
    for (std::size_t s = 0; s < 64; ++s) {
        CHECK(rep_h.ledger[s].theta_index == rep_1.ledger[s].theta_index);
        CHECK(rep_h.ledger[s].theta_prime_index == rep_1.ledger[s].theta_prime_index);
    }
    // The identity leg of the pair estimates the (real) norm; its sample
    // mean keeps a finite-M imaginary part, so compare against the oracle.
    const double norm_oracle = exact_expectation(ens, gram_1).real();
    const double se = std::sqrt(rep_1.empirical_variance / 64.0);
    CHECK(std::abs(rep_1.estimate.real() - norm_oracle) < 4.0 * se + 1e-12);
}

TEST_CASE("norm estimate stays in the unit interval in exact mode") {
    const AnsatzSpec spec = two_vertex_spec();
    const PriorGuiding prior = uniform_grid_prior(spec.n_params(), 13, 0.0, kTwoPi, 29);
    EstimatorConfig cfg;
    cfg.M = 500;
    cfg.mode = EstimatorMode::exact;
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const GuidingNet net = seeded_net(static_cast<int>(spec.n_params()), seed);
        cfg.seed = derive_seed(31, seed);
        const EstimatorReport rep = estimate_norm(spec, net, prior, cfg);
        CHECK(rep.estimate.real() >= -1e-9);
        CHECK(rep.estimate.real() <= 1.0 + 1e-9);
    }
}

TEST_CASE("ledger CSV round-trips its rows") {
    const AnsatzSpec spec = two_vertex_spec();
    const PauliSum h = two_vertex_h();
    const PriorGuiding prior = uniform_grid_prior(spec.n_params(), 6, 0.0, kTwoPi, 37);
    const GuidingNet net = seeded_net(static_cast<int>(spec.n_params()), 47);

    EstimatorConfig cfg;
    cfg.M = 25;
    cfg.mode = EstimatorMode::exact;
    cfg.seed = 55;
    cfg.keep_ledger = true;
    const EstimatorReport rep = operator_estimator(spec, net, prior, h, cfg);
    REQUIRE(rep.ledger.size() == 25);

    const std::string path = "test_ledger_tmp.csv";
    write_ledger_csv(rep, path, "# config: {}\n# seed: 55\n");
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "# config: {}");
    std::getline(in, line);
    CHECK(line == "# seed: 55");
    std::getline(in, line);
    CHECK(line == "sample-index,theta-index,theta-prime-index,re-x,im-x");
    std::size_t data_rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++data_rows;
    CHECK(data_rows == 25);
    in.close();
    std::filesystem::remove(path);
}

TEST_CASE("metropolis chain walks the continuous prior") {
    const AnsatzSpec spec = two_vertex_spec();
    const PriorGuiding prior = constant_prior();
    const GuidingNet net = seeded_net(static_cast<int>(spec.n_params()), 53);

    MHConfig cfg;
    cfg.proposal_stddev = 0.3;
    cfg.burn_in = 50;
    cfg.thin = 2;
    cfg.seed = 61;
    const auto samples = metropolis_chain(net, prior, {0.5, 0.5}, cfg, 40);
    REQUIRE(samples.size() == 40);
    bool moved = false;
    for (const auto& s : samples) {
        REQUIRE(s.size() == 2);
        CHECK(std::isfinite(s[0]));
        CHECK(std::isfinite(s[1]));
        if (std::abs(s[0] - 0.5) > 1e-12 || std::abs(s[1] - 0.5) > 1e-12) moved = true;
    }
    CHECK(moved);

    // Grid priors have no continuous density to walk.
    const PriorGuiding grid = uniform_grid_prior(spec.n_params(), 5, 0.0, kTwoPi, 67);
    CHECK_THROWS_AS(metropolis_chain(net, grid, {0.5, 0.5}, cfg, 4), std::invalid_argument);
}

TEST_CASE("estimator configuration validation") {
    EstimatorConfig cfg;
    cfg.M = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.M = 10;
    cfg.M_Q = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    MHConfig mh;
    mh.proposal_stddev = 0.0;
    CHECK_THROWS_AS(mh.validate(), std::invalid_argument);
}
