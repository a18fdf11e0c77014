#ifndef ACLAB_EXPERIMENTS_HPP
#define ACLAB_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "aclab/acceptance.hpp"
#include "aclab/config.hpp"

namespace aclab {

/// Known experiment names: profile, interaction, flat, saddle, two-layer,
/// toda, fermi, verify-all.
std::vector<std::string> experiment_names();
bool is_experiment(const std::string& name);

struct ExperimentResult {
    std::string name;
    std::vector<CriterionResult> criteria;
    bool pass() const {
        for (const auto& c : criteria)
            if (!c.pass()) return false;
        return true;
    }
};

/// Throws when config values violate their contracts (epsilon lists outside
/// (0, 0.5], nonpositive resolutions, malformed numbers).
void validate_config(const Config& cfg);

/// Runs an experiment, writes CSV artifacts, a checks.csv table and a
/// manifest.json under <outdir>/<experiment>/, and returns the per-criterion
/// results.
ExperimentResult run_experiment(const std::string& name, const Config& cfg,
                                const std::string& outdir, unsigned seed);

} // namespace aclab

#endif
