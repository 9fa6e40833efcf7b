#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "floq/experiment.hpp"
#include "floq/verify.hpp"

int main(int argc, char** argv) {
    CLI::App app{"floq: stroboscopic and geometric decompositions of periodically driven "
                 "quantum systems"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int threads = 0;
    auto* run = app.add_subcommand("run", "run an experiment config and write result tables");
    run->add_option("config", config_path, "config file (key-table text or JSON)")->required();
    run->add_option("--threads", threads, "worker threads over sweep points (default: cores)");
    run->add_option("--out", out_dir, "output directory (overrides config and FLOQ_OUT_DIR)");

    auto* list = app.add_subcommand("list-models", "print the model registry");

    std::string filter;
    double tol_scale = 1.0;
    auto* verify = app.add_subcommand("verify", "run the built-in invariant suite");
    verify->add_option("--filter", filter, "restrict to one module");
    verify->add_option("--tol-scale", tol_scale, "scale all tolerances (0 must fail)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            floq::ExperimentConfig cfg;
            try {
                cfg = floq::ExperimentConfig::from_file(config_path);
                if (threads > 0) cfg.numerics.threads = threads;
                cfg.validate();
            } catch (const floq::Error& e) {
                std::fprintf(stderr, "validation error: %s\n", e.what());
                return floq::kExitValidation;
            }
            const auto outcome = floq::run_experiment(cfg);
            const int code = floq::write_outcome(outcome, cfg, out_dir);
            if (code != 0)
                std::fprintf(stderr, "run failed (exit %d): %s\n", code, outcome.error.c_str());
            else
                std::printf("wrote %zu table(s)\n", outcome.tables.size());
            return code;
        }

        if (*list) {
            for (const auto& m : floq::model_registry()) {
                std::printf("%s: %s\n", m.name.c_str(), m.description.c_str());
                for (const auto& p : m.params)
                    std::printf("    %-16s = %-12g %s\n", p.name.c_str(), p.value, p.doc.c_str());
                std::printf("    sweepable:");
                for (const auto& s : m.sweepable) std::printf(" %s", s.c_str());
                std::printf("\n");
            }
            return 0;
        }

        if (*verify) {
            const auto results = floq::run_verification(filter, tol_scale);
            if (results.empty()) {
                std::fprintf(stderr, "no checks match filter '%s'\n", filter.c_str());
                return 1;
            }
            int failed = 0;
            for (const auto& r : results) {
                std::printf("%-12s %-36s observed %.3e bound %.3e  %s\n", r.module.c_str(),
                            r.name.c_str(), r.observed, r.bound, r.passed ? "PASS" : "FAIL");
                if (!r.passed) ++failed;
            }
            std::printf("%zu checks, %d failed\n", results.size(), failed);
            return failed == 0 ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return floq::kExitNumeric;
    }
    return 0;
}
