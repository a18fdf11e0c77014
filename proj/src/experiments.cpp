#include "aclab/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace aclab {

namespace {

const std::map<std::string, std::vector<int>>& experiment_map() {
    static const std::map<std::string, std::vector<int>> m = {
        {"profile", {1, 2, 3, 4}},
        {"interaction", {5}},
        {"flat", {6}},
        {"saddle", {7}},
        {"toda", {8}},
        {"two-layer", {9, 10, 13}},
        {"fermi", {11, 12}},
        {"verify-all", all_criteria_ids()},
    };
    return m;
}

} // namespace

std::vector<std::string> experiment_names() {
    std::vector<std::string> out;
    for (const auto& kv : experiment_map()) out.push_back(kv.first);
    return out;
}

void validate_config(const Config& cfg) {
    if (cfg.has("epsilon")) {
        auto eps = cfg.get_list("epsilon", {});
        if (eps.empty()) throw std::runtime_error("config: empty epsilon list");
        for (double e : eps)
            if (!(e > 0.0) || e > 0.5)
                throw std::runtime_error("config: epsilon outside (0, 0.5]");
    }
    if (cfg.has("resolution") && cfg.get_int("resolution", 0) < 32)
        throw std::runtime_error("config: resolution below 32 per unit length");
    if (cfg.has("interaction.T")) {
        auto T = cfg.get_list("interaction.T", {});
        double prev = -1e300;
        for (double t : T) {
            if (t < prev) throw std::runtime_error("config: interaction.T not ascending");
            prev = t;
        }
    }
}

bool is_experiment(const std::string& name) { return experiment_map().count(name) > 0; }

ExperimentResult run_experiment(const std::string& name, const Config& cfg,
                                const std::string& outdir, unsigned seed) {
    auto it = experiment_map().find(name);
    if (it == experiment_map().end())
        throw std::invalid_argument("unknown experiment '" + name + "'");

    AcceptanceContext ctx;
    ctx.cfg = cfg;
    ctx.seed = seed;
    ctx.outdir = outdir.empty() ? "" : outdir + "/" + name;
    if (!ctx.outdir.empty()) std::filesystem::create_directories(ctx.outdir);

    ExperimentResult res;
    res.name = name;
    res.criteria = run_criteria(ctx, it->second);

    if (!ctx.outdir.empty()) {
        // acceptance table; wall-clock rows are omitted so reruns stay
        // byte-identical
        std::FILE* fp = std::fopen((ctx.outdir + "/checks.csv").c_str(), "w");
        if (fp) {
            std::fprintf(fp, "criterion,check,value,threshold,pass\n");
            for (const auto& cr : res.criteria)
                for (const auto& ck : cr.checks) {
                    if (ck.name.rfind("runtime", 0) == 0) continue;
                    std::fprintf(fp, "%d,\"%s\",%.17g,%.17g,%d\n", cr.id, ck.name.c_str(),
                                 ck.value, ck.threshold, ck.pass ? 1 : 0);
                }
            std::fclose(fp);
        }
    }
    if (!ctx.outdir.empty()) {
        nlohmann::json j;
        j["experiment"] = name;
        j["version"] = kVersion;
        j["seed"] = seed;
        nlohmann::json jcfg = nlohmann::json::object();
        for (const auto& kv : cfg.items()) jcfg[kv.first] = kv.second;
        j["config"] = jcfg;
        nlohmann::json jc = nlohmann::json::array();
        for (const auto& cr : res.criteria) {
            nlohmann::json e;
            e["id"] = cr.id;
            e["title"] = cr.title;
            e["pass"] = cr.pass();
            nlohmann::json checks = nlohmann::json::array();
            for (const auto& ck : cr.checks) {
                nlohmann::json c;
                c["name"] = ck.name;
                // wall-clock values would break byte-identical reruns
                if (ck.name.rfind("runtime", 0) != 0) c["value"] = ck.value;
                c["threshold"] = ck.threshold;
                c["pass"] = ck.pass;
                if (!ck.detail.empty()) c["detail"] = ck.detail;
                checks.push_back(c);
            }
            e["checks"] = checks;
            jc.push_back(e);
        }
        j["criteria"] = jc;
        std::ofstream out(ctx.outdir + "/manifest.json");
        out << j.dump(2) << "\n";
    }
    return res;
}

} // namespace aclab
