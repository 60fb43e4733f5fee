#pragma once

// Weil sums S_{a,b} = sum_x chi_1(a x^d + b (x+1)^d) and
// S_k(A,B) = sum_x chi_1(A x^{p^k+1} + B x): direct summation, the Gauss-sum
// expansion, and Coulter's closed forms for the Gold exponent d = p^k + 1.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cbct/characters.hpp"
#include "cbct/field.hpp"

namespace cbct {

// Constants derived from x^{p^k+1} on F_{p^n}.
struct GoldParams {
    unsigned k = 0;
    unsigned e = 0;      // gcd(n, k)
    unsigned d_lin = 0;  // gcd(2k, n)
    bool ne_even = false;          // n/e even
    std::optional<unsigned> m;     // n/2, when n is even
    std::optional<unsigned> t;     // m/e, when n/e is even
    std::uint64_t exponent = 0;    // p^k + 1

    static GoldParams make(const FieldCtx& ctx, unsigned k);
};

// k with p^k + 1 == d and 1 <= k < n, if any.
std::optional<unsigned> gold_k_for_exponent(const FieldCtx& ctx, std::uint64_t d);

enum class WeilBranch {
    direct,
    co98_1_odd,
    co98_1_even_generic,
    co98_1_even_special,
    co98_pp_odd,
    co98_pp_even,
    co98_nonpp_zero,
    co98_nonpp_root,
    gold_degenerate_q,
    gold_degenerate_zero,
};

std::string_view to_string(WeilBranch b);

// p^{half_pow / 2} in double precision; exact for even half_pow in range.
double sqrt_p_power(std::uint32_t p, unsigned half_pow);

// Exact closed-form value sign * p^{half_pow/2} * i^quarter * chi_1(phase).
struct ClosedForm {
    WeilBranch branch = WeilBranch::direct;
    int sign = 0;
    unsigned half_pow = 0;
    int quarter = 0;
    Fe phase{};

    Cx value(const Characters& chars) const;
};

struct WeilValue {
    Cx value;
    WeilBranch branch = WeilBranch::direct;
};

// Test hook: negates every closed form carrying `branch`. Used by the verify
// fault-injection harness; never set in normal operation.
void set_fault_injection(std::optional<WeilBranch> branch);
std::optional<WeilBranch> fault_injection();

// --- direct and Gauss-expansion routes, any monomial exponent -------------

Cx s_alpha_beta_direct(const Characters& chars, std::uint64_t d_exp, Fe alpha, Fe beta);

// G(conj psi_j, chi_1) for every j, computed once per field.
class GaussTable {
public:
    explicit GaussTable(const Characters& chars);
    Cx conj_psi(std::uint32_t j) const { return values_[j]; }

private:
    std::vector<Cx> values_;
};

// S_{a,b} through chi_1(w) = (q-1)^{-1} sum_j G(conj psi_j, chi_1) psi_j(w),
// valid for w != 0; the x = 0 and x = -1 terms are evaluated directly.
Cx s_alpha_beta_gauss(const Characters& chars, const GaussTable& gauss, std::uint64_t d_exp, Fe alpha,
                      Fe beta);

Cx s_k_direct(const Characters& chars, const GoldParams& gp, Fe A, Fe B);

// --- Gold closed forms ------------------------------------------------------

class GoldWeil {
public:
    GoldWeil(const Characters& chars, unsigned k);

    const GoldParams& params() const { return gp_; }
    const Characters& characters() const { return *chars_; }
    const FieldCtx& field() const { return chars_->field(); }

    // f(x) = A^{p^k} x^{p^{2k}} + A x
    LinMap coulter_map(Fe A) const;
    // L_{a,b}(x) = (a+b) x^{p^{2k}} + (b^{p^{n-k}} + b) x
    LinMap lab_map(Fe alpha, Fe beta) const;

    // A^{(q-1)/(p^e+1)} == (-1)^{m/e}; only meaningful when n/e is even.
    bool norm_special(Fe A) const;
    // Norm criterion for L_{a,b}; requires a + b != 0.
    bool lab_is_permutation(Fe alpha, Fe beta) const;

    // Root of f(x) = -B^{p^k} with the smallest encoding.
    std::optional<Fe> coulter_root(const LinMap& f, Fe B) const;
    // Closed-form root, n/e odd only.
    Fe x0_explicit(Fe A, Fe B) const;

    ClosedForm coulter_s0_form(Fe A) const;
    // Uses the supplied f = coulter_map(A) so callers can cache it.
    ClosedForm coulter_s_form(Fe A, Fe B, const LinMap& f) const;
    ClosedForm coulter_s_form(Fe A, Fe B) const { return coulter_s_form(A, B, coulter_map(A)); }
    ClosedForm gold_form(Fe alpha, Fe beta) const;

    WeilValue coulter_s0(Fe A) const;
    WeilValue coulter_s(Fe A, Fe B) const;
    WeilValue gold_s_alpha_beta(Fe alpha, Fe beta) const;

    // A x^{p^k+1}
    Fe quad(Fe A, Fe x) const;

private:
    ClosedForm finish(ClosedForm f) const;

    const Characters* chars_;
    GoldParams gp_;
    std::uint64_t norm_exp_ = 0;  // (q-1)/(p^e+1) when n/e is even
    Fe norm_target_{};            // (-1)^t
};

}  // namespace cbct
