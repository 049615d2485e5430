#pragma once

#include <string>

#include <json.hpp>

#include "wavefront/charspec.hpp"
#include "wavefront/wavesolve.hpp"

namespace wavefront {

/// shortest round-trippable decimal form; "inf" for infinities
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);

std::string profile_csv(const Profile& p);
void write_profile_csv(const std::string& path, const Profile& p);

/// sidecar document: c, beta, anchor, sup, decay_fit, iterations, residual
nlohmann::json profile_sidecar(const SolveResult& result, double residual_sup,
                               const std::string& verdict);

std::string char_report_csv(const CharReport& rep);
nlohmann::json char_report_json(const CharReport& rep);

}  // namespace wavefront
