#pragma once

#include "qcwb/poly.hpp"

#include <json.hpp>

#include <string>

namespace qcwb {

// Keys: num_vars, degree_bound, scale_bits, [scale_den], terms[{vars, coeff}],
// threshold_num, threshold_den, gap_num, gap_den. scale_den is written only
// when the denominator is not 2^scale_bits.
nlohmann::json mtp_to_json(const MtpInstance& inst);
MtpInstance mtp_from_json(const nlohmann::json& j);

std::string write_mtp(const MtpInstance& inst);
MtpInstance read_mtp(const std::string& text);

MtpInstance load_mtp(const std::string& path);
void save_mtp(const std::string& path, const MtpInstance& inst);

// Whole-file helpers shared by the loaders.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qcwb
