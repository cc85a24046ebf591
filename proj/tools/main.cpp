#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "experiments.hpp"
#include "harmax/errors.hpp"
#include "harmax/kernels.hpp"
#include "harmax/util.hpp"

// Exit codes: 0 success, 2 usage, 3 validation, 4 algorithm failure.

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitAlgorithm = 4;

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"harmax: covering lemmas, maximal functions and Poisson "
                 "integrals on discretized spaces"};
    app.require_subcommand(1);

    auto* list_cmd =
        app.add_subcommand("list", "list the available experiments");

    std::string sample_name;
    auto* sample_cmd = app.add_subcommand(
        "sample-config", "print a ready-to-run config for an experiment");
    sample_cmd->add_option("experiment", sample_name)->required();

    struct RunArgs {
        std::string config_path;
        std::string out_dir = "harmax-out";
        std::uint64_t seed = 0;
        bool seed_set = false;
        unsigned threads = harmax::util::default_threads();
        bool no_simd = false;
    };
    RunArgs args;
    std::vector<CLI::App*> run_cmds;
    for (const auto& info : harmax::cli::list_experiments()) {
        auto* cmd = app.add_subcommand(info.name, info.description);
        cmd->add_option("--config", args.config_path,
                        "experiment configuration file (json)")
            ->required();
        cmd->add_option("--out", args.out_dir, "output directory");
        cmd->add_option("--seed", args.seed, "seed override")
            ->each([&args](const std::string&) { args.seed_set = true; });
        cmd->add_option("--threads", args.threads, "worker thread count");
        cmd->add_flag("--no-simd", args.no_simd,
                      "force the scalar reference kernels");
        run_cmds.push_back(cmd);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (list_cmd->parsed()) {
            for (const auto& info : harmax::cli::list_experiments())
                std::printf("%-17s %s\n", info.name.c_str(),
                            info.description.c_str());
            return 0;
        }
        if (sample_cmd->parsed()) {
            std::cout << harmax::cli::sample_config(sample_name).dump(2)
                      << "\n";
            return 0;
        }
        for (std::size_t i = 0; i < run_cmds.size(); ++i) {
            if (!run_cmds[i]->parsed()) continue;
            if (args.no_simd) harmax::kern::force_scalar(true);
            harmax::cli::RunOptions opt;
            opt.experiment = harmax::cli::list_experiments()[i].name;
            opt.out_dir = args.out_dir;
            opt.threads = args.threads == 0 ? 1 : args.threads;
            if (args.seed_set) opt.seed_override = args.seed;
            std::ifstream in(args.config_path);
            if (!in)
                throw harmax::validation_error("cannot open config file '" +
                                               args.config_path + "'");
            try {
                in >> opt.config;
            } catch (const nlohmann::json::exception& e) {
                throw harmax::validation_error(std::string("config parse: ") +
                                               e.what());
            }
            harmax::cli::run_experiment(opt);
            return 0;
        }
    } catch (const harmax::validation_error& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return kExitValidation;
    } catch (const harmax::algorithm_failure& e) {
        std::fprintf(stderr, "algorithm failure: %s\n", e.what());
        return kExitAlgorithm;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
    return 0;
}
