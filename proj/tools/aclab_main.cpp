#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "aclab/config.hpp"
#include "aclab/experiments.hpp"
#include "aclab/kernels.hpp"

namespace {

void usage() {
    std::printf("usage: aclab run <experiment> <config-path> [--out <dir>] [--seed <u64>]\n");
    std::printf("experiments:");
    for (const auto& n : aclab::experiment_names()) std::printf(" %s", n.c_str());
    std::printf("\n");
    std::printf("config: plain key=value lines, optional [sections]; ACLAB_THREADS caps\n");
    std::printf("parallelism. Outputs land under <out>/<experiment>/.\n");
}

} // namespace

int main(int argc, char** argv) {
    aclab::threads::configure_from_env();
    if (argc < 4 || std::strcmp(argv[1], "run") != 0) {
        usage();
        return 2;
    }
    std::string experiment = argv[2];
    std::string config_path = argv[3];
    std::string outdir = "out";
    unsigned long long seed = 0;
    for (int i = 4; i < argc; ++i) {
        if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
            outdir = argv[++i];
        } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
            seed = std::strtoull(argv[++i], nullptr, 10);
        } else {
            std::fprintf(stderr, "unknown option '%s'\n", argv[i]);
            usage();
            return 2;
        }
    }
    if (!aclab::is_experiment(experiment)) {
        std::fprintf(stderr, "unknown experiment '%s'\n", experiment.c_str());
        usage();
        return 2;
    }

    aclab::Config cfg;
    try {
        cfg = aclab::Config::from_file(config_path);
        aclab::validate_config(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    if (cfg.has("seed") && seed == 0) seed = (unsigned long long)cfg.get_int("seed", 0);
    if (cfg.has("out") && outdir == std::string("out")) outdir = cfg.get("out", outdir);

    try {
        aclab::ExperimentResult res =
            aclab::run_experiment(experiment, cfg, outdir, unsigned(seed));
        bool all = true;
        for (const auto& cr : res.criteria) {
            for (const auto& ck : cr.checks) {
                std::printf("[%s] criterion %2d | %-44s | value %.6g vs %.6g\n",
                            ck.pass ? "PASS" : "FAIL", cr.id, ck.name.c_str(), ck.value,
                            ck.threshold);
                all = all && ck.pass;
            }
        }
        std::printf("%s: %s\n", experiment.c_str(), all ? "all checks passed" : "FAILURES");
        return all ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
