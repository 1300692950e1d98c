#pragma once

#include <stdexcept>
#include <string>

namespace fractaldim {

/** Failure categories surfaced by the library.
 *
 * Shape/contractivity defects make the downstream formulas meaningless and
 * map to the CLI's validation exit code; everything else is a numeric/domain
 * failure of an otherwise well-formed system.
 */
enum class errc {
    non_square_matrix,
    non_contractive,
    singular_branch,
    margin_too_large,
    depth_overflow,
    not_expanding,
    no_bracket,
    gap_zero,
    rho_too_large,
    conformal,
    target_out_of_range,
    budget_exceeded,
    degenerate_scales,
    empty_intersection,
    invalid_params,
    undefined,
};

const char* errc_name(errc code);

/** Library exception carrying a machine-checkable error code. */
class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const { return code_; }

    /** True for defects in the system specification itself (as opposed to
     * numeric/domain failures of a well-formed one). */
    bool is_validation() const {
        return code_ == errc::non_square_matrix || code_ == errc::non_contractive ||
               code_ == errc::singular_branch;
    }

  private:
    errc code_;
};

}  // namespace fractaldim
