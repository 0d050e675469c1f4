#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gsi {

// Byte strings. Values 0..255 throughout; no text encoding is assumed anywhere.
using Bytes = std::string;
using ByteView = std::string_view;

enum class errc : uint8_t {
  invalid_input,
  corrupt_parse,
  invalid_grammar,
  range_error,
  alphabet_error,
  parameter_error,
  balance_error,
  routing_error,
  format_error,
  verification_failed,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_input: return "invalid-input";
    case errc::corrupt_parse: return "corrupt-parse";
    case errc::invalid_grammar: return "invalid-grammar";
    case errc::range_error: return "range-error";
    case errc::alphabet_error: return "alphabet-error";
    case errc::parameter_error: return "parameter-error";
    case errc::balance_error: return "balance-error";
    case errc::routing_error: return "routing-error";
    case errc::format_error: return "format-error";
    case errc::verification_failed: return "verification-failed";
  }
  return "unknown-error";
}

class error : public std::runtime_error {
 public:
  static constexpr uint64_t kNoOffset = ~uint64_t{0};

  error(errc code, const std::string& msg, uint64_t offset = kNoOffset)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg),
        code_(code),
        offset_(offset) {}

  errc code() const noexcept { return code_; }
  // Byte offset into a file or buffer for format errors; kNoOffset otherwise.
  uint64_t offset() const noexcept { return offset_; }

 private:
  errc code_;
  uint64_t offset_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg,
                              uint64_t offset = error::kNoOffset) {
  throw error(c, msg, offset);
}

// ceil(log2(v)) for v >= 1; ceil_log2(1) == 0.
inline uint32_t ceil_log2(uint64_t v) {
  return v <= 1 ? 0u : uint32_t(std::bit_width(v - 1));
}

}  // namespace gsi
