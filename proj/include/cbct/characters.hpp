#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "cbct/field.hpp"

namespace cbct {

using Cx = std::complex<double>;

// Additive and multiplicative characters of a field. Holds a reference to the
// field context, which must outlive it.
class Characters {
public:
    explicit Characters(const FieldCtx& ctx);

    const FieldCtx& field() const { return *ctx_; }

    // exp(2 pi i t / p) from the precomputed root table.
    Cx zeta(std::uint32_t t) const { return roots_[t % roots_.size()]; }
    // Principal additive character chi_1(x) = zeta(Tr(x)).
    Cx chi1(Fe x) const { return roots_[ctx_->trace(x)]; }
    // psi_k(g^l) = exp(2 pi i k l / (q-1)); psi_k(0) = 0 for every k, including k = 0.
    Cx psi(std::uint32_t k, Fe x) const;
    // Quadratic character; refuses characteristic 2.
    int eta(Fe x) const;
    // G(psi_k, chi_1) = sum over z != 0 of psi_k(z) chi_1(z), by direct summation.
    Cx gauss_sum(std::uint32_t k) const;

private:
    const FieldCtx* ctx_;
    std::vector<Cx> roots_;
};

// Exact units i^k, k taken mod 4.
inline Cx i_pow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace cbct
