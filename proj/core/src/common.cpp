#include "ocqa/common.hpp"

#include <sstream>

namespace ocqa {

Count binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  mpz_class result;
  mpz_bin_uiui(result.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return result;
}

std::size_t bit_length(const Count& value) {
  if (value <= 0) throw ValidationError("bit_length requires a positive count");
  return mpz_sizeinbase(value.get_mpz_t(), 2);
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string decimal_string(const Ratio& value, std::size_t digits) {
  Ratio v = value;
  v.canonicalize();
  bool negative = v < 0;
  if (negative) v = -v;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  mpz_class scaled = (v.get_num() * scale) / v.get_den();
  mpz_class whole = scaled / scale;
  mpz_class frac = scaled % scale;
  std::string frac_str = frac.get_str();
  if (frac_str.size() < digits)
    frac_str.insert(0, digits - frac_str.size(), '0');
  std::ostringstream out;
  if (negative && scaled != 0) out << '-';
  out << whole.get_str();
  if (digits > 0) out << '.' << frac_str;
  return out.str();
}

}  // namespace ocqa
