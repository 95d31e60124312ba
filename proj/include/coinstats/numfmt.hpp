#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <system_error>

#include "coinstats/error.hpp"

namespace coinstats {

// Shortest decimal form that parses back to the same double.
// Locale-independent; used for dataset files so save/load round-trips exactly.
inline std::string fmt_shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Fixed 12-significant-digit general form used by all report outputs.
inline std::string fmt_sig12(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

// Quantize to the value that fmt_sig12 prints, so numbers embedded in JSON
// documents carry the same 12-digit precision as the CSV outputs.
inline double quantize_sig12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 12);
  double out = v;
  std::from_chars(buf, res.ptr, out);
  return out;
}

// Strict decimal parse: '.' separator, optional sign, scientific notation
// accepted, nothing else (thousands separators, trailing junk, inf/nan all
// rejected). `what` names the field in error messages.
inline double parse_number_strict(std::string_view text, std::string_view what) {
  std::string_view body = text;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  double value = 0.0;
  const char* first = body.data();
  const char* last = body.data() + body.size();
  auto res = std::from_chars(first, last, value, std::chars_format::general);
  if (res.ec != std::errc() || res.ptr != last || body.empty()) {
    raise(Errc::malformed_row,
          "unparseable number for " + std::string(what) + ": '" +
              std::string(text) + "'");
  }
  if (!std::isfinite(value)) {
    raise(Errc::malformed_row,
          "non-finite number for " + std::string(what) + ": '" +
              std::string(text) + "'");
  }
  return value;
}

// Non-negative integer parse for counts and seeds.
inline unsigned long long parse_uint_strict(std::string_view text,
                                            std::string_view what) {
  unsigned long long value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last || text.empty()) {
    raise(Errc::malformed_row,
          "unparseable count for " + std::string(what) + ": '" +
              std::string(text) + "'");
  }
  return value;
}

}  // namespace coinstats
