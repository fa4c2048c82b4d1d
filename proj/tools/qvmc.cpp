#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

#include "qvmc/config.hpp"
#include "qvmc/parallel.hpp"
#include "qvmc/runner.hpp"

int main(int argc, char** argv) {
    qvmc::par::apply();  // honor QVMC_WORKERS before any parallel region

    CLI::App app{"variational Monte Carlo over random quantum circuits"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string mode;
    std::string filter;
    std::uint64_t seed = 0;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path,
                        "config file; written with defaults if it does not exist yet");
        sub->add_option("--seed", seed, "root RNG seed (overrides the config)");
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        return sub;
    };
    const auto add_mode = [&](CLI::App* sub) {
        sub->add_option("--mode", mode, "estimator mode (overrides the config)")
            ->check(CLI::IsMember({"exact", "shots"}));
        return sub;
    };

    add_common(app.add_subcommand(
        "landscape", "deterministic energy grid over the two circuit angles, plus descent paths"));
    add_mode(add_common(app.add_subcommand("train", "two-stage barrier-method training run")));
    add_mode(add_common(
        app.add_subcommand("sweep", "repeated training across a list of barrier positions")));
    add_common(app.add_subcommand("verify", "run the analytic bound suite and report margins"))
        ->add_option("--filter", filter, "substring filter on check names");

    CLI11_PARSE(app, argc, argv);
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    const auto given = [&](const std::string& flag) {
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        return opt != nullptr && opt->count() != 0;
    };

    try {
        qvmc::ExperimentConfig cfg;
        if (given("--config") && std::filesystem::exists(config_path)) {
            cfg = qvmc::load_config(config_path);
            cfg.experiment = name;  // the subcommand picks the experiment
        } else {
            cfg = qvmc::default_config(name);
            if (given("--config")) {
                qvmc::save_config(cfg, config_path);
                std::fprintf(stderr, "wrote default %s config to %s\n", name.c_str(),
                             config_path.c_str());
            }
        }
        if (given("--seed")) cfg.seed = seed;
        if (given("--out")) cfg.out_dir = out_dir;
        if (given("--mode")) cfg.mode = mode;
        if (name == "verify" && given("--filter")) cfg.verify.filter = filter;

        const qvmc::RunResult result = qvmc::run_experiment(cfg);
        std::printf("%s\n", result.message.c_str());
        return result.exit_code;
    } catch (const qvmc::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return qvmc::kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return qvmc::kExitConfigError;
    }
}
