#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "suborbit/errors.hpp"
#include "suborbit/pipelines.hpp"

namespace {

struct Args {
    std::string config;
    std::string out_dir = ".";
    int jobs = 1;
    std::int64_t trunc = -1;
    bool trunc_set = false;
};

void add_pipeline(CLI::App& app, const std::string& name, const std::string& desc,
                  Args& args, std::string& selected) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", args.config, "pipeline config file (TOML-style)")
        ->required();
    sub->add_option("--out", args.out_dir, "output directory for the CSV reports");
    sub->add_option("--jobs", args.jobs, "parallel workers for the per-k checks")
        ->check(CLI::PositiveNumber);
    sub->add_option("--trunc", args.trunc, "override the truncation index N")
        ->check(CLI::NonNegativeNumber);
    sub->callback([&, name] {
        selected = name;
        args.trunc_set = sub->count("--trunc") > 0;
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"suborbit: approximate operator representations of sequences\n"
                 "in weighted l^p and discretized L^p spaces, with certified\n"
                 "error reports"};
    app.require_subcommand(1);

    Args args;
    std::string selected;
    add_pipeline(app, "finite", "finitely supported family in a weighted l^p space", args, selected);
    add_pipeline(app, "localized", "exponentially localized family", args, selected);
    add_pipeline(app, "function", "translate family on a discretized half line", args, selected);
    add_pipeline(app, "gabor", "half Gabor system on a discretized half line", args, selected);
    add_pipeline(app, "decomposition", "atomic-decomposition perturbation check", args, selected);

    CLI11_PARSE(app, argc, argv);

    suborbit::RunOptions options;
    options.out_dir = args.out_dir;
    options.jobs = args.jobs;
    if (args.trunc_set) options.trunc = args.trunc;
    if (const char* seed = std::getenv("SUBORBIT_SEED")) {
        options.seed = std::strtoull(seed, nullptr, 10);
    }

    try {
        const auto cfg = suborbit::KeyValueConfig::parse_file(args.config);
        const int code = suborbit::run_pipeline_to_files(selected, cfg, options);
        if (code != 0) {
            std::cerr << "one or more per-k bounds failed; see "
                      << options.out_dir << "/errors.csv\n";
        }
        return code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
