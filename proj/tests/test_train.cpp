#include <doctest.h>

#include <omp.h>

#include <qvmc/circuits.hpp>
#include <qvmc/guiding.hpp>
#include <qvmc/model.hpp>
#include <qvmc/rng.hpp>
#include <qvmc/train.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
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

GridLossEvaluator small_evaluator(std::size_t points = 12, std::uint64_t prior_seed = 6) {
    const AnsatzSpec spec = two_vertex_spec();
    const PauliSum h = normalize_spectral(heisenberg(spec.graph, 1.0)).first;
    PriorGuiding prior = uniform_grid_prior(spec.n_params(), points, 0.0, kTwoPi, prior_seed);
    return GridLossEvaluator(spec, prior, h);
}

GuidingNet random_net(const GridLossEvaluator& eval, std::uint64_t seed,
                      WChoice w = WChoice::exp_neg) {
    GuidingNet net(static_cast<int>(eval.ansatz().n_params()), {6}, w);
    net.init_random(seed);
    Rng r(derive_seed(seed, 4));
    for (auto& v : net.head_A_weights()) v = 0.3 * r.normal();
    for (auto& v : net.head_B_weights()) v = 0.3 * r.normal();
    return net;
}

}  // namespace

TEST_CASE("barrier term values and slope") {
    // Center and asymptotes.
    CHECK(barrier_term(0.8, 0.8, 1.0, 5.0) == doctest::Approx(0.0));
    CHECK(barrier_term(1.0, 0.8, 0.4, 5.0) == doctest::Approx(-5.0 * std::tanh(0.5)).epsilon(1e-12));
    CHECK(barrier_term(0.0, 0.9, 0.05, 5.0) == doctest::Approx(5.0).epsilon(1e-6));
    // Slope at the center is -z / y.
    const double h = 1e-6;
    const double slope =
        (barrier_term(0.8 + h, 0.8, 0.25, 5.0) - barrier_term(0.8 - h, 0.8, 0.25, 5.0)) / (2 * h);
    CHECK(slope == doctest::Approx(-5.0 / 0.25).epsilon(1e-6));
}

TEST_CASE("regularizer etas follow the sample-size prescription") {
    const RegularizerEtas e = regularizer_etas(2.0, 0.5, 0.25, 0.05, 100);
    CHECK(e.eta_h == doctest::Approx(std::sqrt((4.0 + 0.5) / (0.05 * 100))).epsilon(1e-12));
    CHECK(e.eta_one == doctest::Approx(std::sqrt((1.0 + 0.25) / (0.05 * 100))).epsilon(1e-12));
}

TEST_CASE("loss value assembles ratio plus barrier") {
    const GridLossEvaluator eval = small_evaluator();
    const GuidingNet net = random_net(eval, 11);
    LossConfig cfg;
    cfg.kind = LossKind::barrier;
    cfg.barrier_x = 0.3;
    cfg.barrier_y = 0.5;
    cfg.barrier_z = 2.0;

    const LossValue full = eval.value(net, cfg, LossStage::full, 0);
    CHECK(full.loss ==
          doctest::Approx(full.raw_ratio + barrier_term(full.norm, 0.3, 0.5, 2.0)).epsilon(1e-12));
    CHECK(full.raw_ratio == doctest::Approx(full.energy / full.norm).epsilon(1e-12));

    const LossValue stage1 = eval.value(net, cfg, LossStage::barrier_only, 0);
    CHECK(stage1.loss == doctest::Approx(barrier_term(stage1.norm, 0.3, 0.5, 2.0)).epsilon(1e-12));
    CHECK(stage1.norm == doctest::Approx(full.norm).epsilon(1e-12));

    cfg.kind = LossKind::raw;
    const LossValue raw = eval.value(net, cfg, LossStage::full, 0);
    CHECK(raw.loss == doctest::Approx(raw.raw_ratio).epsilon(1e-12));

    // Energy shift only under the regularized loss.
    CHECK(eval.energy_shift(cfg) == 0.0);
    cfg.kind = LossKind::regularized;
    CHECK(eval.energy_shift(cfg) == doctest::Approx(eval.h_spectral_norm()).epsilon(1e-12));
}

TEST_CASE("analytic gradients match finite differences") {
    const GridLossEvaluator eval = small_evaluator();
    LossConfig cfg;
    cfg.barrier_x = 0.2;
    cfg.barrier_y = 0.5;

    for (const LossKind kind : {LossKind::raw, LossKind::barrier, LossKind::regularized}) {
        cfg.kind = kind;
        for (const LossStage stage : {LossStage::barrier_only, LossStage::full}) {
            GuidingNet net = random_net(eval, 100 + static_cast<int>(kind));
            const std::vector<double> g = eval.gradient(net, cfg, stage, 0);
            REQUIRE(g.size() == net.param_count());
            const double h = 1e-6;
            double worst = 0.0;
            for (std::size_t k = 0; k < g.size(); k += 3) {
                const double saved = net.params()[k];
                net.params()[k] = saved + h;
                const double up = eval.value(net, cfg, stage, 0).loss;
                net.params()[k] = saved - h;
                const double down = eval.value(net, cfg, stage, 0).loss;
                net.params()[k] = saved;
                worst = std::max(worst, std::abs((up - down) / (2 * h) - g[k]));
            }
            CHECK(worst < 1e-5);
        }
    }
}

TEST_CASE("sampled-mode gradient uses common random numbers") {
    const GridLossEvaluator eval = small_evaluator(8);
    GuidingNet net = random_net(eval, 7);
    LossConfig cfg;
    cfg.kind = LossKind::barrier;
    cfg.evaluation = LossConfig::Evaluation::sampled;
    cfg.estimator.M = 20;
    cfg.estimator.mode = EstimatorMode::exact;
    cfg.estimator.seed = 3;

    const std::vector<double> g1 = eval.gradient(net, cfg, LossStage::full, 5);
    const std::vector<double> g2 = eval.gradient(net, cfg, LossStage::full, 5);
    REQUIRE(g1.size() == g2.size());
    for (std::size_t k = 0; k < g1.size(); ++k) CHECK(g1[k] == g2[k]);
    for (double v : g1) CHECK(std::isfinite(v));
}

TEST_CASE("adam drives a quadratic bowl to its center") {
    AdamConfig cfg;
    cfg.lr = 0.05;
    AdamState opt(3, cfg);
    std::vector<double> p = {2.0, -1.5, 0.7};
    const std::vector<double> c = {0.3, 0.4, -0.2};
    std::vector<double> g(3);
    for (int it = 0; it < 2000; ++it) {
        for (int k = 0; k < 3; ++k) g[k] = 2.0 * (p[k] - c[k]);
        opt.apply(p, g);
    }
    for (int k = 0; k < 3; ++k) CHECK(std::abs(p[k] - c[k]) < 1e-4);
    CHECK(opt.step == 2000);

    AdamState bad(2);
    std::vector<double> p2 = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(bad.apply(p2, p2), std::invalid_argument);
}

TEST_CASE("two-stage training crosses the barrier and descends monotonically") {
    const GridLossEvaluator eval = small_evaluator();
    GuidingNet net = random_net(eval, 19);
    LossConfig loss;
    loss.kind = LossKind::barrier;
    loss.barrier_x = 0.4;
    loss.barrier_y = 1.0;
    loss.barrier_z = 5.0;
    AdamConfig adam;
    TrainBudget budget;
    budget.stage1_max = 5000;
    budget.stage2_iterations = 300;
    budget.patience = 0;

    const TrainResult res = two_stage_train(eval, std::move(net), loss, adam, budget);
    CHECK(res.stage1_crossed);
    CHECK_FALSE(res.loss_fault);
    CHECK(res.monotone_ok);
    CHECK(res.final_value.norm > 0.4);
    CHECK(res.trace.rows.size() == res.stage1_iterations + budget.stage2_iterations + 1);

    // Stage labels partition the trace; elapsed time is non-decreasing.
    double last_elapsed = 0.0;
    for (std::size_t i = 0; i < res.trace.rows.size(); ++i) {
        const TraceRow& r = res.trace.rows[i];
        CHECK(r.stage == (i < res.stage1_iterations ? 1 : 2));
        CHECK(r.elapsed_seconds >= last_elapsed);
        last_elapsed = r.elapsed_seconds;
    }
}

TEST_CASE("vanishing guiding function surfaces as a loss fault") {
    const GridLossEvaluator eval = small_evaluator();
    // W = |A| with all-zero parameters vanishes on the whole grid.
    GuidingNet net(static_cast<int>(eval.ansatz().n_params()), {4}, WChoice::abs_val_val);
    LossConfig loss;
    loss.kind = LossKind::barrier;
    const TrainResult res = two_stage_train(eval, std::move(net), loss, {}, {});
    CHECK(res.loss_fault);
    CHECK_FALSE(res.stage1_crossed);
    CHECK(res.stage1_iterations == 1);
}

TEST_CASE("sweep rows are deterministic and seed-distinct") {
    const GridLossEvaluator eval = small_evaluator();
    SweepSettings s;
    s.x_values = {0.2, 0.5};
    s.repeats = 3;
    s.root_seed = 77;
    s.loss.kind = LossKind::barrier;
    s.budget.stage1_max = 2000;
    s.budget.stage2_iterations = 60;
    s.budget.patience = 0;
    s.hidden = {6};

    const std::vector<SweepRow> a = barrier_sweep(eval, s);
    const std::vector<SweepRow> b = barrier_sweep(eval, s);
    REQUIRE(a.size() == 6);
    REQUIRE(b.size() == 6);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].seed == b[i].seed);
        CHECK(a[i].final_energy == b[i].final_energy);
        CHECK(a[i].final_loss == b[i].final_loss);
    }
    // Distinct repeats start from distinct weights, so they land apart.
    CHECK(a[0].final_energy != a[1].final_energy);
    CHECK(a[0].seed != a[1].seed);
}

TEST_CASE("sweep rows are identical across worker counts") {
    const GridLossEvaluator eval = small_evaluator();
    SweepSettings s;
    s.x_values = {0.3};
    s.repeats = 4;
    s.root_seed = 5;
    s.budget.stage1_max = 2000;
    s.budget.stage2_iterations = 40;
    s.budget.patience = 0;
    s.hidden = {6};

    const int saved = par::worker_count();
    omp_set_num_threads(1);
    const std::vector<SweepRow> serial = barrier_sweep(eval, s);
    omp_set_num_threads(4);
    const std::vector<SweepRow> wide = barrier_sweep(eval, s);
    omp_set_num_threads(saved);
    REQUIRE(serial.size() == wide.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].final_energy == wide[i].final_energy);
        CHECK(serial[i].final_norm == wide[i].final_norm);
    }
}

TEST_CASE("delta-start sweep enters stage 2 feasible and jitter separates repeats") {
    const GridLossEvaluator eval = small_evaluator();
    SweepSettings s;
    s.x_values = {0.6};
    s.repeats = 3;
    s.root_seed = 13;
    s.init = SweepInit::delta_center;
    s.delta_tau = 12.0;
    s.jitter = 0.0;
    s.budget.stage2_iterations = 40;
    s.budget.patience = 0;

    // Zero jitter: every repeat runs the identical trajectory.
    const std::vector<SweepRow> frozen = barrier_sweep(eval, s);
    REQUIRE(frozen.size() == 3);
    for (const SweepRow& r : frozen) {
        CHECK(r.stage1_crossed);
        // The near-delta start is already feasible: stage 1 is just the
        // three-evaluation confirmation streak.
        CHECK(r.stage1_iterations == 3);
        CHECK(r.final_energy == frozen[0].final_energy);
    }

    s.jitter = 0.1;
    const std::vector<SweepRow> jittered = barrier_sweep(eval, s);
    CHECK(jittered[0].final_energy != jittered[1].final_energy);

    s.delta_tau = -1.0;
    CHECK_THROWS_AS(barrier_sweep(eval, s), std::invalid_argument);
    s.delta_tau = 12.0;
    s.delta_center = {0.0};  // wrong length for a two-parameter ansatz
    CHECK_THROWS_AS(barrier_sweep(eval, s), std::invalid_argument);
}

TEST_CASE("trace and sweep CSV exports pin their formats") {
    const GridLossEvaluator eval = small_evaluator();
    GuidingNet net = random_net(eval, 23);
    LossConfig loss;
    loss.kind = LossKind::barrier;
    loss.barrier_x = 0.2;
    TrainBudget budget;
    budget.stage2_iterations = 5;
    budget.patience = 0;
    const TrainResult res = two_stage_train(eval, std::move(net), loss, {}, budget);

    const std::string trace_path = "test_trace_tmp.csv";
    write_trace_csv(res.trace, trace_path, "# config: {}\n# seed: 9\n");
    {
        std::ifstream in(trace_path);
        REQUIRE(in.good());
        std::string line;
        std::getline(in, line);
        CHECK(line == "# config: {}");
        std::getline(in, line);
        CHECK(line == "# seed: 9");
        std::getline(in, line);
        CHECK(line == "iteration,stage,loss,energy-estimate,norm-estimate,elapsed-seconds");
        std::size_t rows = 0;
        while (std::getline(in, line))
            if (!line.empty()) ++rows;
        CHECK(rows == res.trace.rows.size());
    }
    std::filesystem::remove(trace_path);

    SweepSettings s;
    s.x_values = {0.2};
    s.repeats = 2;
    s.budget.stage1_max = 500;
    s.budget.stage2_iterations = 5;
    s.budget.patience = 0;
    s.hidden = {6};
    const std::vector<SweepRow> rows = barrier_sweep(eval, s);
    const std::string sweep_path = "test_sweep_tmp.csv";
    write_sweep_csv(rows, sweep_path, "");
    {
        std::ifstream in(sweep_path);
        REQUIRE(in.good());
        std::string line;
        std::getline(in, line);
        CHECK(line ==
              "x,repeat,seed,final-energy,final-norm,final-loss,stage1-crossed,"
              "stage1-iterations,monotone-ok");
        std::size_t n = 0;
        while (std::getline(in, line))
            if (!line.empty()) ++n;
        CHECK(n == 2);
    }
    std::filesystem::remove(sweep_path);
}

TEST_CASE("train checkpoint records network and optimizer state") {
    const GridLossEvaluator eval = small_evaluator();
    GuidingNet net = random_net(eval, 29);
    LossConfig loss;
    loss.kind = LossKind::barrier;
    loss.barrier_x = 0.2;
    TrainBudget budget;
    budget.stage2_iterations = 10;
    budget.patience = 0;
    const TrainResult res = two_stage_train(eval, std::move(net), loss, {}, budget);

    const std::string path = "test_ckpt_tmp.json";
    save_train_checkpoint(res.net, eval.prior(), 42, res.adam, path);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    CHECK(text.find("\"optimizer\"") != std::string::npos);
    CHECK(text.find("\"seed\": 42") != std::string::npos);
    in.close();

    // The guiding part of the checkpoint loads back bit-exact.
    const Checkpoint loaded = load_checkpoint(path);
    REQUIRE(loaded.net.param_count() == res.net.param_count());
    for (std::size_t k = 0; k < res.net.param_count(); ++k)
        CHECK(loaded.net.params()[k] == res.net.params()[k]);
    std::filesystem::remove(path);
}
