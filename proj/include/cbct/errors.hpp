#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cbct {

enum class ErrorCode {
    non_prime_p,
    reducible_modulus,
    invalid_modulus,
    field_too_large,
    division_by_zero,
    degree_not_dividing,
    even_characteristic,
    zero_coefficient,
    zero_a,
    zero_lead_coefficient,
    not_a_gold_exponent,
    rounding_tolerance_exceeded,
    homogeneity_violation,
    precondition_violated,
    unsupported_engine,
    invalid_input,
    internal,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI can map it to an exit status without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    // Bugs and engine disagreements, as opposed to bad user input.
    bool is_internal() const noexcept {
        return code_ == ErrorCode::internal || code_ == ErrorCode::rounding_tolerance_exceeded ||
               code_ == ErrorCode::homogeneity_violation;
    }

private:
    ErrorCode code_;
};

}  // namespace cbct
