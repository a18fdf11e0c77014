#ifndef ACLAB_ACCEPTANCE_HPP
#define ACLAB_ACCEPTANCE_HPP

#include <optional>
#include <string>
#include <vector>

#include "aclab/ansatz.hpp"
#include "aclab/config.hpp"
#include "aclab/field.hpp"
#include "aclab/profile1d.hpp"

namespace aclab {

struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string detail;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<Check> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
};

/// Shared state across criteria so the acceptance suite computes each heavy
/// artifact once. outdir == "" suppresses file output.
struct AcceptanceContext {
    Config cfg;
    std::string outdir;
    unsigned seed = 0;

    const Profile& profile20();  // quartic, T_max = 20, h = 0.01
    const Profile& profile24();  // quartic, T_max = 24, h = 0.01
    const ScalarField2D& flat_state();   // criterion 6 strip
    const ScalarField2D& saddle_state(); // criterion 7 box

    struct TwoLayerMember {
        double epsilon;
        ScalarField2D field;
        std::vector<InterfaceCurve> interfaces;
        CutoffProfile cp;
        GridSpec gs;
        bool stable = false;
        double toda_residual_sup = 0.0, toda_rhs_sup = 0.0;
        double reduced_ratio = 0.0;
    };
    const std::vector<TwoLayerMember>& two_layer_family(); // eps 0.1/0.05/0.025

  private:
    std::optional<Profile> prof20_, prof24_;
    std::optional<ScalarField2D> flat_, saddle_;
    std::optional<std::vector<TwoLayerMember>> family_;
};

CriterionResult criterion_1(AcceptanceContext& ctx);  // profile closed form
CriterionResult criterion_2(AcceptanceContext& ctx);  // sigma0 + equipartition
CriterionResult criterion_3(AcceptanceContext& ctx);  // tail constants
CriterionResult criterion_4(AcceptanceContext& ctx);  // spectral gap + zero mode
CriterionResult criterion_5(AcceptanceContext& ctx);  // interaction expansion
CriterionResult criterion_6(AcceptanceContext& ctx);  // flat steady state suite
CriterionResult criterion_7(AcceptanceContext& ctx);  // saddle 4-end state
CriterionResult criterion_8(AcceptanceContext& ctx);  // Toda ODE oracles
CriterionResult criterion_9(AcceptanceContext& ctx);  // ansatz round trip
CriterionResult criterion_10(AcceptanceContext& ctx); // Toda-matched two layers
CriterionResult criterion_11(AcceptanceContext& ctx); // distance comparison
CriterionResult criterion_12(AcceptanceContext& ctx); // B identity
CriterionResult criterion_13(AcceptanceContext& ctx); // reduced stability

std::vector<CriterionResult> run_criteria(AcceptanceContext& ctx,
                                          const std::vector<int>& ids);
std::vector<int> all_criteria_ids();

} // namespace aclab

#endif
