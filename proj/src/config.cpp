#include "qvmc/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace qvmc {

namespace {

using json = nlohmann::ordered_json;

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, _] : j.items())
        if (!known.count(key))
            throw ConfigError("config: unknown key \"" + key + "\" in " + where);
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["experiment"] = c.experiment;
    j["seed"] = c.seed;
    j["out-dir"] = c.out_dir;
    j["mode"] = c.mode;

    json model;
    model["graph-file"] = c.model.graph_file;
    model["n-vertices"] = c.model.n_vertices;
    json edges = json::array();
    for (const auto& [a, b] : c.model.edges) edges.push_back(json::array({a, b}));
    model["edges"] = edges;
    model["coupling"] = c.model.coupling;
    model["normalize"] = c.model.normalize;
    j["model"] = model;

    json ansatz;
    ansatz["kind"] = c.ansatz.kind;
    ansatz["trotter-steps"] = c.ansatz.trotter_steps;
    ansatz["init"] = c.ansatz.init;
    j["ansatz"] = ansatz;

    json prior;
    prior["kind"] = c.guiding.prior.kind;
    prior["points"] = c.guiding.prior.points;
    prior["box-min"] = c.guiding.prior.box_min;
    prior["box-max"] = c.guiding.prior.box_max;
    prior["k-max"] = c.guiding.prior.k_max;
    json guiding;
    guiding["hidden"] = c.guiding.hidden;
    guiding["w-choice"] = c.guiding.w_choice;
    guiding["prior"] = prior;
    j["guiding"] = guiding;

    json estimator;
    estimator["pair-samples"] = c.loss.estimator.pair_samples;
    estimator["shots-per-test"] = c.loss.estimator.shots_per_test;
    estimator["protocol"] = c.loss.estimator.protocol;
    json loss;
    loss["kind"] = c.loss.kind;
    loss["barrier-x"] = c.loss.barrier_x;
    loss["barrier-y"] = c.loss.barrier_y;
    loss["barrier-z"] = c.loss.barrier_z;
    loss["kappa"] = c.loss.kappa;
    loss["estimator"] = estimator;
    j["loss"] = loss;

    json adam;
    adam["lr"] = c.train.adam.lr;
    adam["beta1"] = c.train.adam.beta1;
    adam["beta2"] = c.train.adam.beta2;
    adam["epsilon"] = c.train.adam.epsilon;
    json budget;
    budget["stage1-max"] = c.train.budget.stage1_max;
    budget["stage2-iterations"] = c.train.budget.stage2_iterations;
    budget["patience"] = c.train.budget.patience;
    budget["patience-tol"] = c.train.budget.patience_tol;
    json train;
    train["adam"] = adam;
    train["budget"] = budget;
    j["train"] = train;

    json sweep;
    sweep["x-values"] = c.sweep.x_values;
    sweep["repeats"] = c.sweep.repeats;
    sweep["init"] = c.sweep.init;
    if (!c.sweep.delta_center.empty()) sweep["delta-center"] = c.sweep.delta_center;
    sweep["delta-tau"] = c.sweep.delta_tau;
    sweep["jitter"] = c.sweep.jitter;
    j["sweep"] = sweep;

    json landscape;
    landscape["resolution"] = c.landscape.resolution;
    json starts = json::array();
    for (const auto& [a, b] : c.landscape.starts) starts.push_back(json::array({a, b}));
    landscape["starts"] = starts;
    landscape["descent-steps"] = c.landscape.descent_steps;
    landscape["descent-rate"] = c.landscape.descent_rate;
    j["landscape"] = landscape;

    json verify;
    verify["filter"] = c.verify.filter;
    j["verify"] = verify;
    return j;
}

ExperimentConfig from_json(const json& j) {
    reject_unknown_keys(j, {"experiment", "seed", "out-dir", "mode", "model", "ansatz", "guiding",
                            "loss", "train", "sweep", "landscape", "verify"},
                        "the top level");
    ExperimentConfig c;
    c.experiment = j.value("experiment", c.experiment);
    c.seed = j.value("seed", c.seed);
    c.out_dir = j.value("out-dir", c.out_dir);
    c.mode = j.value("mode", c.mode);

    if (j.contains("model")) {
        const json& m = j.at("model");
        reject_unknown_keys(m, {"graph-file", "n-vertices", "edges", "coupling", "normalize"},
                            "model");
        c.model.graph_file = m.value("graph-file", c.model.graph_file);
        c.model.n_vertices = m.value("n-vertices", c.model.n_vertices);
        if (m.contains("edges")) {
            c.model.edges.clear();
            for (const auto& e : m.at("edges"))
                c.model.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        }
        c.model.coupling = m.value("coupling", c.model.coupling);
        c.model.normalize = m.value("normalize", c.model.normalize);
    }
    if (j.contains("ansatz")) {
        const json& a = j.at("ansatz");
        reject_unknown_keys(a, {"kind", "trotter-steps", "init"}, "ansatz");
        c.ansatz.kind = a.value("kind", c.ansatz.kind);
        c.ansatz.trotter_steps = a.value("trotter-steps", c.ansatz.trotter_steps);
        c.ansatz.init = a.value("init", c.ansatz.init);
    }
    if (j.contains("guiding")) {
        const json& g = j.at("guiding");
        reject_unknown_keys(g, {"hidden", "w-choice", "prior"}, "guiding");
        if (g.contains("hidden")) c.guiding.hidden = g.at("hidden").get<std::vector<int>>();
        c.guiding.w_choice = g.value("w-choice", c.guiding.w_choice);
        if (g.contains("prior")) {
            const json& p = g.at("prior");
            reject_unknown_keys(p, {"kind", "points", "box-min", "box-max", "k-max"},
                                "guiding.prior");
            c.guiding.prior.kind = p.value("kind", c.guiding.prior.kind);
            c.guiding.prior.points = p.value("points", c.guiding.prior.points);
            c.guiding.prior.box_min = p.value("box-min", c.guiding.prior.box_min);
            c.guiding.prior.box_max = p.value("box-max", c.guiding.prior.box_max);
            c.guiding.prior.k_max = p.value("k-max", c.guiding.prior.k_max);
        }
    }
    if (j.contains("loss")) {
        const json& l = j.at("loss");
        reject_unknown_keys(
            l, {"kind", "barrier-x", "barrier-y", "barrier-z", "kappa", "estimator"}, "loss");
        c.loss.kind = l.value("kind", c.loss.kind);
        c.loss.barrier_x = l.value("barrier-x", c.loss.barrier_x);
        c.loss.barrier_y = l.value("barrier-y", c.loss.barrier_y);
        c.loss.barrier_z = l.value("barrier-z", c.loss.barrier_z);
        c.loss.kappa = l.value("kappa", c.loss.kappa);
        if (l.contains("estimator")) {
            const json& e = l.at("estimator");
            reject_unknown_keys(e, {"pair-samples", "shots-per-test", "protocol"},
                                "loss.estimator");
            c.loss.estimator.pair_samples = e.value("pair-samples", c.loss.estimator.pair_samples);
            c.loss.estimator.shots_per_test =
                e.value("shots-per-test", c.loss.estimator.shots_per_test);
            c.loss.estimator.protocol = e.value("protocol", c.loss.estimator.protocol);
        }
    }
    if (j.contains("train")) {
        const json& t = j.at("train");
        reject_unknown_keys(t, {"adam", "budget"}, "train");
        if (t.contains("adam")) {
            const json& a = t.at("adam");
            reject_unknown_keys(a, {"lr", "beta1", "beta2", "epsilon"}, "train.adam");
            c.train.adam.lr = a.value("lr", c.train.adam.lr);
            c.train.adam.beta1 = a.value("beta1", c.train.adam.beta1);
            c.train.adam.beta2 = a.value("beta2", c.train.adam.beta2);
            c.train.adam.epsilon = a.value("epsilon", c.train.adam.epsilon);
        }
        if (t.contains("budget")) {
            const json& b = t.at("budget");
            reject_unknown_keys(b, {"stage1-max", "stage2-iterations", "patience", "patience-tol"},
                                "train.budget");
            c.train.budget.stage1_max = b.value("stage1-max", c.train.budget.stage1_max);
            c.train.budget.stage2_iterations =
                b.value("stage2-iterations", c.train.budget.stage2_iterations);
            c.train.budget.patience = b.value("patience", c.train.budget.patience);
            c.train.budget.patience_tol = b.value("patience-tol", c.train.budget.patience_tol);
        }
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        reject_unknown_keys(s, {"x-values", "repeats", "init", "delta-center", "delta-tau", "jitter"},
                            "sweep");
        if (s.contains("x-values")) c.sweep.x_values = s.at("x-values").get<std::vector<double>>();
        c.sweep.repeats = s.value("repeats", c.sweep.repeats);
        c.sweep.init = s.value("init", c.sweep.init);
        if (s.contains("delta-center"))
            c.sweep.delta_center = s.at("delta-center").get<std::vector<double>>();
        c.sweep.delta_tau = s.value("delta-tau", c.sweep.delta_tau);
        c.sweep.jitter = s.value("jitter", c.sweep.jitter);
    }
    if (j.contains("landscape")) {
        const json& l = j.at("landscape");
        reject_unknown_keys(l, {"resolution", "starts", "descent-steps", "descent-rate"},
                            "landscape");
        c.landscape.resolution = l.value("resolution", c.landscape.resolution);
        if (l.contains("starts")) {
            c.landscape.starts.clear();
            for (const auto& s : l.at("starts"))
                c.landscape.starts.emplace_back(s.at(0).get<double>(), s.at(1).get<double>());
        }
        c.landscape.descent_steps = l.value("descent-steps", c.landscape.descent_steps);
        c.landscape.descent_rate = l.value("descent-rate", c.landscape.descent_rate);
    }
    if (j.contains("verify")) {
        const json& v = j.at("verify");
        reject_unknown_keys(v, {"filter"}, "verify");
        c.verify.filter = v.value("filter", c.verify.filter);
    }
    return c;
}

void check_one_of(const std::string& value, std::initializer_list<const char*> allowed,
                  const std::string& what) {
    for (const char* a : allowed)
        if (value == a) return;
    std::string msg = "config: " + what + " must be one of {";
    bool first = true;
    for (const char* a : allowed) {
        if (!first) msg += ", ";
        msg += a;
        first = false;
    }
    throw ConfigError(msg + "}, got \"" + value + "\"");
}

}  // namespace

void ExperimentConfig::validate() const {
    check_one_of(experiment, {"landscape", "train", "sweep", "verify"}, "experiment");
    check_one_of(mode, {"exact", "shots"}, "mode");
    check_one_of(ansatz.kind, {"simplified", "full"}, "ansatz.kind");
    check_one_of(ansatz.init, {"singlet", "zero"}, "ansatz.init");
    check_one_of(guiding.w_choice, {"abs", "exp-neg", "gauss"}, "guiding.w-choice");
    check_one_of(guiding.prior.kind, {"constant", "delta-grid", "evolution-series"},
                 "guiding.prior.kind");
    check_one_of(loss.kind, {"raw", "barrier", "regularized"}, "loss.kind");
    check_one_of(loss.estimator.protocol, {"auto", "real-part", "two-part"},
                 "loss.estimator.protocol");
    if (ansatz.trotter_steps < 1) throw ConfigError("config: ansatz.trotter-steps must be >= 1");
    if (model.graph_file.empty()) {
        if (model.n_vertices < 2) throw ConfigError("config: model.n-vertices must be >= 2");
        if (model.edges.empty()) throw ConfigError("config: model.edges must be nonempty");
    }
    if (guiding.prior.kind == "delta-grid") {
        if (guiding.prior.points == 0) throw ConfigError("config: guiding.prior.points must be > 0");
        if (!(guiding.prior.box_min < guiding.prior.box_max))
            throw ConfigError("config: guiding.prior box must have box-min < box-max");
    }
    if (loss.estimator.pair_samples == 0)
        throw ConfigError("config: loss.estimator.pair-samples must be > 0");
    if (loss.estimator.shots_per_test < 1)
        throw ConfigError("config: loss.estimator.shots-per-test must be >= 1");
    if (!(loss.barrier_y > 0.0)) throw ConfigError("config: loss.barrier-y must be positive");
    if (!(loss.kappa > 0.0) || loss.kappa >= 0.5)
        throw ConfigError("config: loss.kappa must lie in (0, 0.5)");
    if ((experiment == "train" || experiment == "sweep") && guiding.prior.kind != "delta-grid")
        throw ConfigError("config: training requires the delta-grid prior");
    if (experiment == "landscape" && ansatz.kind != "simplified")
        throw ConfigError("config: the landscape scan is defined for the simplified ansatz");
    if (experiment == "sweep") {
        if (sweep.x_values.empty()) throw ConfigError("config: sweep.x-values must be nonempty");
        if (sweep.repeats == 0) throw ConfigError("config: sweep.repeats must be > 0");
        if (sweep.init != "random" && sweep.init != "delta")
            throw ConfigError("config: sweep.init must be \"random\" or \"delta\"");
        if (!(sweep.delta_tau > 0.0)) throw ConfigError("config: sweep.delta-tau must be positive");
        if (sweep.jitter < 0.0) throw ConfigError("config: sweep.jitter must be non-negative");
    }
    if (experiment == "landscape") {
        if (landscape.resolution < 2) throw ConfigError("config: landscape.resolution must be >= 2");
        if (landscape.descent_steps < 0 || !(landscape.descent_rate > 0.0))
            throw ConfigError("config: landscape descent settings invalid");
    }
}

ExperimentConfig default_config(const std::string& experiment) {
    ExperimentConfig c;
    c.experiment = experiment;
    if (experiment == "verify") c.guiding.prior.kind = "delta-grid";
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
    json j;
    try {
        j = json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        // e.what() carries the byte position; prepend the file for context.
        throw ConfigError("config: " + path + ": " + e.what());
    }
    ExperimentConfig c;
    try {
        c = from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: " + path + ": " + e.what());
    }
    c.validate();
    return c;
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("config: cannot write \"" + path + "\"");
    out << to_json(cfg).dump(2) << "\n";
}

std::string config_json(const ExperimentConfig& cfg) { return to_json(cfg).dump(); }

}  // namespace qvmc
