#include "cbct/characters.hpp"

#include <numbers>

namespace cbct {

Characters::Characters(const FieldCtx& ctx) : ctx_(&ctx), roots_(ctx.p()) {
    const double step = 2.0 * std::numbers::pi / static_cast<double>(ctx.p());
    for (std::uint32_t t = 0; t < ctx.p(); ++t) roots_[t] = std::polar(1.0, step * t);
    if (ctx.p() == 2) roots_[1] = {-1.0, 0.0};
}

Cx Characters::psi(std::uint32_t k, Fe x) const {
    if (x.is_zero()) return {0.0, 0.0};
    const std::uint64_t ord = ctx_->order();
    const std::uint64_t e = (static_cast<std::uint64_t>(k % ord) * ctx_->log(x)) % ord;
    if (e == 0) return {1.0, 0.0};
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(ord));
}

int Characters::eta(Fe x) const {
    if (!ctx_->odd()) throw Error(ErrorCode::even_characteristic, "quadratic character needs odd q");
    if (x.is_zero()) return 0;
    return (ctx_->log(x) % 2 == 0) ? 1 : -1;
}

Cx Characters::gauss_sum(std::uint32_t k) const {
    Cx acc{0.0, 0.0};
    for (std::uint32_t z = 1; z < ctx_->q(); ++z) acc += psi(k, Fe{z}) * chi1(Fe{z});
    return acc;
}

}  // namespace cbct
