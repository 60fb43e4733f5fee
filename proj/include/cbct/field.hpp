#pragma once

// Exact arithmetic in F_{p^n} backed by exp/log (Zech) tables, plus
// F_p-linear algebra for linearized polynomials sum c_i x^{p^i}.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbct/errors.hpp"

namespace cbct {

// Field element in canonical encoding: the little-endian base-p digits of
// `enc` are the polynomial-basis coefficients (constant term first).
struct Fe {
    std::uint32_t enc = 0;

    constexpr auto operator<=>(const Fe&) const = default;
    constexpr bool is_zero() const { return enc == 0; }
};

inline constexpr std::uint64_t kDefaultMaxQ = std::uint64_t{1} << 20;

bool is_prime(std::uint64_t v);
std::vector<std::uint64_t> prime_factors(std::uint64_t v);

class FieldCtx {
public:
    // Validates p and the modulus. When `modulus` is empty the lexicographically
    // smallest monic irreducible (c_0 compared first) is selected. `modulus`
    // lists n+1 coefficients, constant first, leading coefficient 1.
    static FieldCtx build(std::uint32_t p, unsigned n,
                          const std::optional<std::vector<std::uint32_t>>& modulus = std::nullopt,
                          std::uint64_t max_q = kDefaultMaxQ);

    std::uint32_t p() const { return p_; }
    unsigned n() const { return n_; }
    std::uint32_t q() const { return q_; }
    std::uint32_t order() const { return q_ - 1; }  // size of the multiplicative group
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }
    Fe generator() const { return generator_; }
    bool odd() const { return p_ != 2; }

    static constexpr Fe zero() { return Fe{0}; }
    static constexpr Fe one() { return Fe{1}; }
    Fe from_int(std::int64_t v) const;  // image of v in the prime subfield
    bool contains(Fe x) const { return x.enc < q_; }

    Fe add(Fe a, Fe b) const;
    Fe sub(Fe a, Fe b) const { return add(a, neg(b)); }
    Fe neg(Fe a) const;
    Fe mul(Fe a, Fe b) const {
        if (a.enc == 0 || b.enc == 0) return Fe{0};
        return Fe{exp_[log_[a.enc] + log_[b.enc]]};
    }
    Fe inv(Fe a) const;
    Fe div(Fe a, Fe b) const { return mul(a, inv(b)); }
    // Negative exponents are allowed for nonzero bases; 0^0 = 1.
    Fe pow(Fe a, std::int64_t e) const;
    // x^{p^i}; i is reduced mod n so frobenius(x, n) == x.
    Fe frobenius(Fe x, std::int64_t i) const;
    std::uint32_t trace(Fe x) const { return trace_[x.enc]; }
    // x^{(q-1)/(p^d-1)}, the norm into F_{p^d}; requires d | n.
    Fe rel_norm(Fe x, unsigned d) const;

    std::uint32_t log(Fe x) const;  // discrete log to base g, x != 0
    Fe exp(std::uint64_t k) const { return Fe{exp_[k % order()]}; }

    std::vector<std::uint32_t> digits(Fe x) const;
    Fe from_digits(std::span<const std::uint32_t> digits) const;

    // Reference addition straight from the digit vectors; the table path is
    // checked against it in tests.
    Fe add_digitwise(Fe a, Fe b) const;

    std::string modulus_string() const;

private:
    FieldCtx() = default;
    void build_tables();

    std::uint32_t p_ = 0;
    unsigned n_ = 0;
    std::uint32_t q_ = 0;
    std::vector<std::uint32_t> modulus_;
    Fe generator_{};
    std::uint32_t neg_one_log_ = 0;
    std::vector<std::uint32_t> exp_;    // length 2(q-1) so mul skips the reduction
    std::vector<std::uint32_t> log_;    // log_[0] unused
    std::vector<std::uint32_t> zech_;   // log(1 + g^k), kZechNone when 1 + g^k = 0
    std::vector<std::uint32_t> trace_;
    std::vector<std::uint32_t> pow_p_;  // p^i, i < n
};

// One term c * x^{p^frob} of a linearized polynomial.
struct LinTerm {
    Fe coeff;
    unsigned frob = 0;
};

// F_p-linear map x -> sum c_i x^{p^i}, held as an n x n matrix over F_p in the
// polynomial basis together with its reduced row echelon form.
class LinMap {
public:
    static LinMap build(const FieldCtx& ctx, std::vector<LinTerm> terms);

    Fe apply(const FieldCtx& ctx, Fe x) const;     // term-wise evaluation
    Fe apply_matrix(const FieldCtx& ctx, Fe x) const;
    unsigned rank() const { return rank_; }
    bool is_permutation() const { return rank_ == n_; }
    // Smallest-enc solution of L(x) = rhs, or nullopt when inconsistent.
    std::optional<Fe> solve(const FieldCtx& ctx, Fe rhs) const;
    // Every element of the kernel, in no particular order (p^{n-rank} values).
    std::vector<Fe> kernel(const FieldCtx& ctx) const;
    // Every solution of L(x) = rhs.
    std::vector<Fe> solve_all(const FieldCtx& ctx, Fe rhs) const;

    const std::vector<LinTerm>& terms() const { return terms_; }

private:
    std::uint32_t p_ = 0;
    unsigned n_ = 0;
    unsigned rank_ = 0;
    std::vector<LinTerm> terms_;
    std::vector<std::uint32_t> matrix_;     // row-major, column j = digits of L(x^j)
    std::vector<std::uint32_t> rref_;       // reduced form of matrix_
    std::vector<std::uint32_t> transform_;  // transform_ * matrix_ == rref_
    std::vector<unsigned> pivots_;          // pivot column of each of the first rank_ rows
};

}  // namespace cbct
