#pragma once

#include <stdexcept>
#include <string>

namespace mcw {

// Failure categories surfaced by the library. The CLI maps these to exit
// codes: input-shaped errors -> 2, numerical failures -> 3.
enum class errc {
  dimension_mismatch,
  degenerate_frame,
  need_refinement,
  zero_sample,
  step_underflow,
  not_unitary,
  unsupported_kind,
  unsupported_input,
  non_finite_field,
  not_antisymmetric,
  projection_degenerate,
  singular_metric,
  boundary_off_constraint,
  missing_analytic_h,
  route_disagreement,
  parse_error,
  validation_error,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

  // True for errors caused by malformed or out-of-range input.
  bool is_input_error() const noexcept {
    switch (code_) {
      case errc::parse_error:
      case errc::validation_error:
      case errc::unsupported_kind:
      case errc::unsupported_input:
      case errc::io_error:
        return true;
      default:
        return false;
    }
  }

 private:
  errc code_;
};

const char* errc_name(errc code) noexcept;

}  // namespace mcw
