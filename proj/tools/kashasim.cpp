// kashasim — command-line runner for the bundled experiments.

#include <CLI11.hpp>
#include <exception>
#include <iostream>
#include <string>

#include "kasha/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"H-aggregate exciton dynamics experiment runner"};
    app.require_subcommand(0, 1);

    std::string config_path;
    std::string out_dir = "out";
    std::int64_t seed = -1;
    std::int64_t n_traj = -1;
    std::int64_t threads = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "config file (sectioned key = value)");
        sub->add_option("-o,--out", out_dir, "output directory")
            ->capture_default_str();
        sub->add_option("-s,--seed", seed, "override run.seed");
        sub->add_option("-t,--trajectories", n_traj, "override mcwf.n_traj");
        sub->add_option("-j,--threads", threads, "override mcwf.threads");
    };

    std::vector<CLI::App*> subs;
    for (const auto& name : kasha::experiment_names())
        subs.push_back(app.add_subcommand(name, "run the '" + name + "' experiment"));
    for (auto* sub : subs) add_common(sub);

    // bare `kashasim -c run.cfg` re-runs whatever the config names
    add_common(&app);

    CLI11_PARSE(app, argc, argv);

    try {
        kasha::Config cfg;
        if (!config_path.empty()) cfg = kasha::Config::parse_file(config_path);
        if (seed >= 0) cfg.set("run", "seed", std::to_string(seed));
        if (n_traj >= 0) cfg.set("mcwf", "n_traj", std::to_string(n_traj));
        if (threads >= 0) cfg.set("mcwf", "threads", std::to_string(threads));

        const auto picked = app.get_subcommands();
        if (!picked.empty()) {
            kasha::run_experiment(picked.front()->get_name(), cfg, out_dir);
        } else {
            kasha::run_experiment(cfg, out_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
