#include "qcwb/poly_io.hpp"

#include "qcwb/errors.hpp"

#include <fstream>
#include <sstream>

namespace qcwb {

namespace {

nlohmann::json int_field(const BigInt& v) {
  if (v <= INT64_MAX && v >= INT64_MIN) return v.convert_to<std::int64_t>();
  return v.str();
}

BigInt read_int(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing key '") + key + "'");
  const auto& f = j.at(key);
  if (f.is_number_integer()) return BigInt(f.get<std::int64_t>());
  if (f.is_string()) {
    try {
      return BigInt(f.get<std::string>());
    } catch (const std::runtime_error&) {
    }
  }
  throw InputError(std::string("key '") + key + "' is not an integer");
}

Rational read_fraction(const nlohmann::json& j, const char* num, const char* den) {
  BigInt d = read_int(j, den);
  if (d == 0) throw InputError(std::string("zero in '") + den + "'");
  return Rational(read_int(j, num), d);
}

}  // namespace

nlohmann::json mtp_to_json(const MtpInstance& inst) {
  const auto& p = inst.poly();
  nlohmann::json j;
  j["num_vars"] = p.num_vars();
  j["degree_bound"] = p.degree_bound();
  j["scale_bits"] = p.scale_bits();
  if (!p.is_dyadic()) j["scale_den"] = p.denominator();
  auto terms = nlohmann::json::array();
  for (const auto& t : p.terms()) terms.push_back({{"vars", t.vars}, {"coeff", t.coeff}});
  j["terms"] = terms;
  j["threshold_num"] = int_field(numerator_of(inst.threshold()));
  j["threshold_den"] = int_field(denominator_of(inst.threshold()));
  j["gap_num"] = int_field(numerator_of(inst.gap()));
  j["gap_den"] = int_field(denominator_of(inst.gap()));
  return j;
}

MtpInstance mtp_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw InputError("instance must be a JSON object");
    auto n = to_int64(read_int(j, "num_vars"));
    auto d = to_int64(read_int(j, "degree_bound"));
    if (n < 0 || n > UINT32_MAX || d < 0 || d > UINT32_MAX)
      throw InputError("num_vars/degree_bound out of range");
    std::int64_t den;
    if (j.contains("scale_den")) {
      den = to_int64(read_int(j, "scale_den"));
      if (j.contains("scale_bits") && to_int64(read_int(j, "scale_bits")) !=
                                          static_cast<std::int64_t>(ceil_log2(BigInt(den))))
        throw InputError("scale_bits inconsistent with scale_den");
    } else {
      auto bits = to_int64(read_int(j, "scale_bits"));
      if (bits < 0 || bits > 62) throw InputError("scale_bits out of range");
      den = std::int64_t{1} << bits;
    }
    if (!j.contains("terms") || !j.at("terms").is_array()) throw InputError("missing terms array");
    std::vector<Term> terms;
    for (const auto& t : j.at("terms")) {
      Term term;
      for (const auto& v : t.at("vars")) {
        auto x = v.get<std::int64_t>();
        if (x < 1 || x > n) throw InputError("term variable out of range");
        term.vars.push_back(static_cast<std::uint32_t>(x));
      }
      term.coeff = to_int64(read_int(t, "coeff"));
      terms.push_back(std::move(term));
    }
    MultilinearPoly poly(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(d), den,
                         std::move(terms));
    return MtpInstance(std::move(poly), read_fraction(j, "threshold_num", "threshold_den"),
                       read_fraction(j, "gap_num", "gap_den"));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed instance: ") + e.what());
  }
}

std::string write_mtp(const MtpInstance& inst) { return mtp_to_json(inst).dump(2) + "\n"; }

MtpInstance read_mtp(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  return mtp_from_json(j);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

MtpInstance load_mtp(const std::string& path) { return read_mtp(read_text_file(path)); }

void save_mtp(const std::string& path, const MtpInstance& inst) {
  write_text_file(path, write_mtp(inst));
}

}  // namespace qcwb
