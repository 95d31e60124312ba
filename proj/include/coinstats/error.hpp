#pragma once

#include <stdexcept>
#include <string>

namespace coinstats {

// Every failure mode the library reports. The CLI maps each code to a
// documented process exit code, so additions here must update exit_code().
enum class Errc {
  // parameter / usage
  invalid_parameter,
  // price-series validation
  non_positive_price,
  duplicate_date,
  out_of_order_date,
  too_short,
  bad_date,
  // panel construction
  empty_intersection,
  duplicate_coin,
  empty_input,
  // correlation
  zero_variance,
  insufficient_overlap,
  too_few_coins,
  degenerate_anchor,
  out_of_range,
  anchor_missing,
  // concentration / indicators
  all_zero,
  negative_value,
  unknown_indicator,
  nothing_to_bin,
  // ingestion
  file_unreadable,
  malformed_row,
  // remote fetch
  network_error,
  schema_mismatch,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_parameter:   return "invalid_parameter";
    case Errc::non_positive_price:  return "non_positive_price";
    case Errc::duplicate_date:      return "duplicate_date";
    case Errc::out_of_order_date:   return "out_of_order_date";
    case Errc::too_short:           return "too_short";
    case Errc::bad_date:            return "bad_date";
    case Errc::empty_intersection:  return "empty_intersection";
    case Errc::duplicate_coin:      return "duplicate_coin";
    case Errc::empty_input:         return "empty_input";
    case Errc::zero_variance:       return "zero_variance";
    case Errc::insufficient_overlap:return "insufficient_overlap";
    case Errc::too_few_coins:       return "too_few_coins";
    case Errc::degenerate_anchor:   return "degenerate_anchor";
    case Errc::out_of_range:        return "out_of_range";
    case Errc::anchor_missing:      return "anchor_missing";
    case Errc::all_zero:            return "all_zero";
    case Errc::negative_value:      return "negative_value";
    case Errc::unknown_indicator:   return "unknown_indicator";
    case Errc::nothing_to_bin:      return "nothing_to_bin";
    case Errc::file_unreadable:     return "file_unreadable";
    case Errc::malformed_row:       return "malformed_row";
    case Errc::network_error:       return "network_error";
    case Errc::schema_mismatch:     return "schema_mismatch";
  }
  return "unknown";
}

// Process exit code classes, documented in the README.
//   2 usage, 3 io, 4 parse, 5 validation, 6 insufficient data,
//   7 anchor, 8 unknown indicator, 9 network
inline int exit_code(Errc c) {
  switch (c) {
    case Errc::invalid_parameter:
      return 2;
    case Errc::file_unreadable:
      return 3;
    case Errc::malformed_row:
    case Errc::bad_date:
    case Errc::schema_mismatch:
      return 4;
    case Errc::non_positive_price:
    case Errc::duplicate_date:
    case Errc::out_of_order_date:
    case Errc::duplicate_coin:
    case Errc::negative_value:
    case Errc::out_of_range:
      return 5;
    case Errc::too_short:
    case Errc::empty_intersection:
    case Errc::empty_input:
    case Errc::zero_variance:
    case Errc::insufficient_overlap:
    case Errc::too_few_coins:
    case Errc::all_zero:
    case Errc::nothing_to_bin:
      return 6;
    case Errc::degenerate_anchor:
    case Errc::anchor_missing:
      return 7;
    case Errc::unknown_indicator:
      return 8;
    case Errc::network_error:
      return 9;
  }
  return 1;
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const { return code_; }
  const char* code_name() const { return errc_name(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace coinstats
