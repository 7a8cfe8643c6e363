#pragma once

#include <stdexcept>
#include <string>

namespace pipeframe {

// Stable error classes. The enum value doubles as the CLI exit status.
enum class Errc {
  ok = 0,
  io_error = 10,
  decode_error = 11,
  empty_sequence = 12,
  dimension_mismatch = 13,
  too_many_levels = 14,
  border_violation = 15,
  size_mismatch = 16,
  degenerate_input = 17,
  no_consensus = 18,
  pair_rejected = 19,
  too_few_points = 20,
  degenerate_configuration = 21,
  count_mismatch = 22,
  parse_error = 23,
  invalid_config = 24,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }
  int exit_code() const noexcept { return static_cast<int>(code_); }

private:
  Errc code_;
};

} // namespace pipeframe
