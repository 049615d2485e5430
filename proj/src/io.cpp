#include "wavefront/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wavefront {

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file " + path);
    out << content;
}

std::string profile_csv(const Profile& p) {
    std::ostringstream os;
    os << "t,phi\n";
    for (int i = 0; i < p.size(); ++i)
        os << format_double(p.t(i)) << ',' << format_double(p.values[i]) << '\n';
    return os.str();
}

void write_profile_csv(const std::string& path, const Profile& p) {
    write_text_file(path, profile_csv(p));
}

nlohmann::json profile_sidecar(const SolveResult& result, double residual_sup,
                               const std::string& verdict) {
    nlohmann::json j;
    j["c"] = result.profile.c;
    j["beta"] = result.beta;
    j["anchor"] = {{"theta", result.profile.anchor_theta},
                   {"final_drift", result.final_drift}};
    j["sup"] = result.profile.sup;
    if (result.profile.decay) {
        j["decay_fit"] = {{"rate", result.profile.decay->rate},
                          {"r2", result.profile.decay->r2},
                          {"points", result.profile.decay->points}};
    } else {
        j["decay_fit"] = nullptr;
    }
    j["iterations"] = result.iterations;
    j["residual"] = residual_sup;
    j["status"] = to_string(result.status);
    j["verdict"] = verdict;
    j["experimental"] = result.experimental;
    j["warnings"] = result.warnings;
    if (result.lambda1) j["lambda1"] = *result.lambda1;
    if (result.lambda2) j["lambda2"] = *result.lambda2;
    return j;
}

namespace {

std::string csv_field(const std::optional<RootPair>& roots, int which) {
    if (!roots) return "";
    if (which == 1) return format_double(roots->lambda1);
    if (roots->lambda2) return format_double(*roots->lambda2);
    return "";
}

}  // namespace

std::string char_report_csv(const CharReport& rep) {
    std::ostringstream os;
    os << "c,gamma_sharp,gamma_K,lambda1,lambda2,lambda1_L,lambda2_L,verdict\n";
    for (const auto& row : rep.rows) {
        os << format_double(row.c) << ',' << format_double(row.gamma_sharp) << ','
           << format_double(row.gamma_K) << ',' << csv_field(row.roots0, 1) << ','
           << csv_field(row.roots0, 2) << ',' << csv_field(row.rootsL, 1) << ','
           << csv_field(row.rootsL, 2) << ',' << to_string(row.verdict) << '\n';
    }
    return os.str();
}

nlohmann::json char_report_json(const CharReport& rep) {
    nlohmann::json j;
    j["c_star"] = rep.c_star;
    j["c_starstar"] = rep.c_starstar;
    j["boundary_flag"] = {{"diverged", rep.boundary.diverged},
                          {"value", format_double(rep.boundary.value)},
                          {"error", rep.boundary.error}};
    j["lower_bound"] = rep.lower_bound;
    j["beta"] = rep.beta;
    auto root_json = [](const std::optional<RootPair>& r) -> nlohmann::json {
        if (!r) return nullptr;
        nlohmann::json out;
        out["lambda1"] = r->lambda1;
        if (r->lambda2) out["lambda2"] = *r->lambda2;
        out["mu_q"] = r->mu_q;
        out["multiplicity_two"] = r->multiplicity_two;
        return out;
    };
    j["rows"] = nlohmann::json::array();
    for (const auto& row : rep.rows) {
        nlohmann::json rj;
        rj["c"] = row.c;
        rj["gamma_sharp"] = format_double(row.gamma_sharp);
        rj["gamma_K"] = format_double(row.gamma_K);
        rj["chi0_roots"] = root_json(row.roots0);
        rj["chiL_roots"] = root_json(row.rootsL);
        rj["verdict"] = to_string(row.verdict);
        j["rows"].push_back(rj);
    }
    return j;
}

}  // namespace wavefront
