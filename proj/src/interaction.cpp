#include "aclab/interaction.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace aclab {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
}

double interaction_integral(const Profile& prof, double T, InteractionVariant v) {
    if (T < 2.0 || T > 0.75 * prof.T_max)
        throw std::invalid_argument("interaction_integral: T outside [2, 3 T_max/4]");
    const double wpp1 = prof.pot.Wpp(1.0);
    double sum = 0.0;
    for (size_t i = 0; i < prof.size(); ++i) {
        double t = prof.t[i];
        double shifted = v == InteractionVariant::lower ? prof.g_at(-t - T) + 1.0
                                                        : prof.g_at(T - t) - 1.0;
        double val = (prof.pot.Wpp(prof.g[i]) - wpp1) * shifted * prof.gp[i];
        sum += (i == 0 || i + 1 == prof.size()) ? 0.5 * val : val;
    }
    return sum * prof.h_t;
}

double interaction_leading(const Profile& prof, double T, InteractionVariant v) {
    return v == InteractionVariant::lower
               ? -4.0 * prof.A_minus * prof.A_minus * std::exp(-kSqrt2 * T)
               : 4.0 * prof.A_plus * prof.A_plus * std::exp(-kSqrt2 * T);
}

std::vector<InteractionReport> expansion_error_scan(const Profile& prof,
                                                    const std::vector<double>& T_list,
                                                    InteractionVariant v) {
    std::vector<InteractionReport> out;
    double prev = -1e300;
    for (double T : T_list) {
        if (T < prev) throw std::invalid_argument("expansion_error_scan: T list not ascending");
        prev = T;
        if (T < 4.0 || T > 0.75 * prof.T_max)
            throw std::invalid_argument("expansion_error_scan: T outside [4, 3 T_max/4]");
        InteractionReport r;
        r.T = T;
        r.integral_value = interaction_integral(prof, T, v);
        r.leading_term = interaction_leading(prof, T, v);
        r.absolute_error = std::fabs(r.integral_value - r.leading_term);
        r.relative_error = r.absolute_error / std::fabs(r.leading_term);
        out.push_back(r);
    }
    if (out.size() >= 2) {
        double lo = 1e300, hi = 0.0;
        for (const auto& r : out) {
            double c = r.absolute_error / std::exp(-(4.0 * kSqrt2 / 3.0) * r.T);
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        if (lo > 0.0 && hi / lo > 20.0)
            throw std::runtime_error("expansion_error_scan: error constant not uniform");
    }
    return out;
}

void save_scan_csv(const std::vector<InteractionReport>& scan, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("save_scan_csv: cannot open " + path);
    std::fprintf(f, "T,integral,leading,abs_err,rel_err\n");
    for (const auto& r : scan)
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.T, r.integral_value,
                     r.leading_term, r.absolute_error, r.relative_error);
    std::fclose(f);
}

} // namespace aclab
