// cosmon: batch front end for the rotating-string mode laboratory.
//   cosmon <experiment> --config <path> [--out <dir>] [--threads N] [--seed S]
#include <cstdlib>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "cosmon/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"cosmon: mode solutions on a rotating cosmic string background"};
    app.require_subcommand(1);

    const std::vector<std::string> experiments = {"trace",          "escape",    "mode",
                                                  "counterexample", "coercivity", "solve",
                                                  "wavefront",      "all"};
    std::string config_path, out_dir = "out";
    int threads = 0;
    std::optional<uint64_t> seed;

    std::string chosen;
    for (const std::string& name : experiments) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory (default: out)");
        sub->add_option("--threads", threads, "worker threads (default: COSMON_THREADS or all)");
        sub->add_option("--seed", seed, "override the config seed");
        sub->callback([&chosen, name] { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);

    if (threads == 0) {
        if (const char* env = std::getenv("COSMON_THREADS")) threads = std::atoi(env);
    }
    return cosmon::runner::run(chosen, config_path, out_dir, threads, seed);
}
