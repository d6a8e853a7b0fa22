#pragma once

#include <stdexcept>
#include <string>

namespace tfiq {

enum class ErrorCode {
    invalid_spin,
    dimension_overflow,
    shape_error,
    oracle_limit_exceeded,
    no_convergence,
    invalid_block,
    invalid_site,
    non_physical_rdm,
    domain_error,
    unsupported_q,
    insufficient_grid,
    sweep_aborted,
    underdetermined,
    invalid_gamma,
    invalid_input,
    range_too_short,
    config_error,
    plot_error,
    io_error,
};

const char* error_code_name(ErrorCode code);

/// Library-wide exception carrying a machine-readable error code.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

} // namespace tfiq
