#include "cbct/weil.hpp"

#include <atomic>
#include <cmath>
#include <numeric>

namespace cbct {

namespace {

std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

std::atomic<int> g_fault{-1};

}  // namespace

GoldParams GoldParams::make(const FieldCtx& ctx, unsigned k) {
    const unsigned n = ctx.n();
    if (k < 1 || k >= n)
        throw Error(ErrorCode::precondition_violated, "Gold parameter k must satisfy 1 <= k < n");
    GoldParams gp;
    gp.k = k;
    gp.e = std::gcd(n, k);
    gp.d_lin = std::gcd(2 * k, n);
    gp.ne_even = (n / gp.e) % 2 == 0;
    if (n % 2 == 0) gp.m = n / 2;
    if (gp.ne_even) gp.t = *gp.m / gp.e;
    gp.exponent = ipow(ctx.p(), k) + 1;
    return gp;
}

std::optional<unsigned> gold_k_for_exponent(const FieldCtx& ctx, std::uint64_t d) {
    std::uint64_t pk = 1;
    for (unsigned k = 1; k < ctx.n(); ++k) {
        pk *= ctx.p();
        if (pk + 1 == d) return k;
    }
    return std::nullopt;
}

std::string_view to_string(WeilBranch b) {
    switch (b) {
        case WeilBranch::direct: return "direct";
        case WeilBranch::co98_1_odd: return "co98_1_odd";
        case WeilBranch::co98_1_even_generic: return "co98_1_even_generic";
        case WeilBranch::co98_1_even_special: return "co98_1_even_special";
        case WeilBranch::co98_pp_odd: return "co98_pp_odd";
        case WeilBranch::co98_pp_even: return "co98_pp_even";
        case WeilBranch::co98_nonpp_zero: return "co98_nonpp_zero";
        case WeilBranch::co98_nonpp_root: return "co98_nonpp_root";
        case WeilBranch::gold_degenerate_q: return "gold_degenerate_q";
        case WeilBranch::gold_degenerate_zero: return "gold_degenerate_zero";
    }
    return "unknown";
}

void set_fault_injection(std::optional<WeilBranch> branch) {
    g_fault.store(branch ? static_cast<int>(*branch) : -1);
}

std::optional<WeilBranch> fault_injection() {
    const int v = g_fault.load();
    if (v < 0) return std::nullopt;
    return static_cast<WeilBranch>(v);
}

double sqrt_p_power(std::uint32_t p, unsigned half_pow) {
    double r = 1.0;
    for (unsigned i = 0; i < half_pow / 2; ++i) r *= p;
    if (half_pow % 2) r *= std::sqrt(static_cast<double>(p));
    return r;
}

Cx ClosedForm::value(const Characters& chars) const {
    if (sign == 0) return {0.0, 0.0};
    const double mag = sqrt_p_power(chars.field().p(), half_pow);
    return static_cast<double>(sign) * mag * i_pow(quarter) * chars.chi1(phase);
}

// ---------------------------------------------------------------------------

Cx s_alpha_beta_direct(const Characters& chars, std::uint64_t d_exp, Fe alpha, Fe beta) {
    const auto& f = chars.field();
    const auto d = static_cast<std::int64_t>(d_exp);
    Cx acc{0.0, 0.0};
    for (std::uint32_t xe = 0; xe < f.q(); ++xe) {
        const Fe x{xe};
        const Fe arg = f.add(f.mul(alpha, f.pow(x, d)), f.mul(beta, f.pow(f.add(x, FieldCtx::one()), d)));
        acc += chars.chi1(arg);
    }
    return acc;
}

GaussTable::GaussTable(const Characters& chars) : values_(chars.field().order()) {
    const std::uint32_t ord = chars.field().order();
    for (std::uint32_t j = 0; j < ord; ++j) values_[j] = chars.gauss_sum((ord - j) % ord);
}

Cx s_alpha_beta_gauss(const Characters& chars, const GaussTable& gauss, std::uint64_t d_exp, Fe alpha,
                      Fe beta) {
    if (alpha.is_zero() || beta.is_zero())
        throw Error(ErrorCode::zero_coefficient, "Gauss expansion needs alpha * beta != 0");
    const auto& f = chars.field();
    const auto d = static_cast<std::int64_t>(d_exp);
    const std::uint32_t ord = f.order();
    const double scale = 1.0 / static_cast<double>(ord);
    const Fe minus_one = f.neg(FieldCtx::one());

    auto expand = [&](Fe w) {
        Cx s{0.0, 0.0};
        for (std::uint32_t j = 0; j < ord; ++j) s += gauss.conj_psi(j) * chars.psi(j, w);
        return s * scale;
    };

    Cx acc{0.0, 0.0};
    for (std::uint32_t xe = 0; xe < f.q(); ++xe) {
        const Fe x{xe};
        const Fe w1 = f.mul(alpha, f.pow(x, d));
        const Fe w2 = f.mul(beta, f.pow(f.add(x, FieldCtx::one()), d));
        if (x == FieldCtx::zero() || x == minus_one) {
            acc += chars.chi1(w1) * chars.chi1(w2);
            continue;
        }
        acc += expand(w1) * expand(w2);
    }
    return acc;
}

Cx s_k_direct(const Characters& chars, const GoldParams& gp, Fe A, Fe B) {
    const auto& f = chars.field();
    const auto d = static_cast<std::int64_t>(gp.exponent);
    Cx acc{0.0, 0.0};
    for (std::uint32_t xe = 0; xe < f.q(); ++xe) {
        const Fe x{xe};
        acc += chars.chi1(f.add(f.mul(A, f.pow(x, d)), f.mul(B, x)));
    }
    return acc;
}

// ---------------------------------------------------------------------------

GoldWeil::GoldWeil(const Characters& chars, unsigned k)
    : chars_(&chars), gp_(GoldParams::make(chars.field(), k)) {
    const auto& f = chars.field();
    if (!f.odd()) throw Error(ErrorCode::even_characteristic, "Gold closed forms need odd p");
    if (gp_.ne_even) {
        norm_exp_ = f.order() / (ipow(f.p(), gp_.e) + 1);
        norm_target_ = (*gp_.t % 2 == 0) ? FieldCtx::one() : f.neg(FieldCtx::one());
    }
}

LinMap GoldWeil::coulter_map(Fe A) const {
    const auto& f = field();
    return LinMap::build(f, {{f.frobenius(A, gp_.k), 2 * gp_.k}, {A, 0}});
}

LinMap GoldWeil::lab_map(Fe alpha, Fe beta) const {
    const auto& f = field();
    const Fe A = f.add(alpha, beta);
    const Fe B = f.add(f.frobenius(beta, f.n() - gp_.k), beta);
    return LinMap::build(f, {{A, 2 * gp_.k}, {B, 0}});
}

bool GoldWeil::norm_special(Fe A) const {
    if (!gp_.ne_even) return false;
    return field().pow(A, static_cast<std::int64_t>(norm_exp_)) == norm_target_;
}

bool GoldWeil::lab_is_permutation(Fe alpha, Fe beta) const {
    const auto& f = field();
    const Fe A = f.add(alpha, beta);
    if (A.is_zero()) throw Error(ErrorCode::zero_lead_coefficient, "alpha + beta = 0");
    const Fe B = f.add(f.frobenius(beta, f.n() - gp_.k), beta);
    Fe v = f.rel_norm(f.div(B, A), gp_.d_lin);
    if ((f.n() / gp_.d_lin) % 2 == 1) v = f.neg(v);
    return v != FieldCtx::one();
}

std::optional<Fe> GoldWeil::coulter_root(const LinMap& fmap, Fe B) const {
    const auto& f = field();
    return fmap.solve(f, f.neg(f.frobenius(B, gp_.k)));
}

Fe GoldWeil::x0_explicit(Fe A, Fe B) const {
    const auto& f = field();
    if (gp_.ne_even) throw Error(ErrorCode::precondition_violated, "explicit root needs n/e odd");
    if (A.is_zero()) throw Error(ErrorCode::zero_a, "A = 0");
    const std::uint64_t ord = f.order();
    const unsigned n = f.n();
    auto pk_mod = [&](std::uint64_t i) {  // p^{i} mod (q-1), using p^n = 1
        std::uint64_t r = 1;
        for (std::uint64_t s = 0; s < i % n; ++s) r = r * f.p() % ord;
        return r;
    };
    const std::uint64_t log_a = f.log(A);
    Fe sum{0};
    for (unsigned j = 0; j < n / gp_.e; ++j) {
        // (p^{(2j+1)k} + 1)/(p^k + 1) = sum_{i=0}^{2j} (-1)^i p^{ik}
        std::uint64_t ex = 0;
        for (unsigned i = 0; i <= 2 * j; ++i) {
            const std::uint64_t term = pk_mod(static_cast<std::uint64_t>(i) * gp_.k);
            ex = (i % 2 == 0) ? (ex + term) % ord : (ex + ord - term) % ord;
        }
        const Fe a_pow = f.exp((ord - (log_a * ex) % ord) % ord);
        Fe term = f.mul(a_pow, f.frobenius(B, static_cast<std::int64_t>(2 * j + 1) * gp_.k));
        if (j % 2 == 1) term = f.neg(term);
        sum = f.add(sum, term);
    }
    const Fe half = f.inv(f.from_int(2));
    return f.neg(f.mul(half, sum));
}

Fe GoldWeil::quad(Fe A, Fe x) const {
    return field().mul(A, field().pow(x, static_cast<std::int64_t>(gp_.exponent)));
}

ClosedForm GoldWeil::finish(ClosedForm cf) const {
    const auto fault = fault_injection();
    if (fault && *fault == cf.branch) cf.sign = -cf.sign;
    return cf;
}

ClosedForm GoldWeil::coulter_s0_form(Fe A) const {
    const auto& f = field();
    if (A.is_zero()) throw Error(ErrorCode::zero_a, "A = 0");
    const unsigned n = f.n();
    ClosedForm cf;
    if (!gp_.ne_even) {
        cf.branch = WeilBranch::co98_1_odd;
        cf.sign = ((n - 1) % 2 == 0 ? 1 : -1) * chars_->eta(A);
        cf.half_pow = n;
        cf.quarter = (f.p() % 4 == 3) ? static_cast<int>(n % 4) : 0;
        return finish(cf);
    }
    const unsigned t = *gp_.t;
    if (!norm_special(A)) {
        cf.branch = WeilBranch::co98_1_even_generic;
        cf.sign = (t % 2 == 0) ? 1 : -1;
        cf.half_pow = n;
    } else {
        cf.branch = WeilBranch::co98_1_even_special;
        cf.sign = (t % 2 == 0) ? -1 : 1;
        cf.half_pow = n + 2 * gp_.e;
    }
    return finish(cf);
}

ClosedForm GoldWeil::coulter_s_form(Fe A, Fe B, const LinMap& fmap) const {
    if (A.is_zero()) throw Error(ErrorCode::zero_a, "A = 0");
    if (B.is_zero()) return coulter_s0_form(A);
    const auto& f = field();
    const unsigned n = f.n();
    const auto root = coulter_root(fmap, B);
    ClosedForm cf;
    if (fmap.is_permutation()) {
        if (!root) throw Error(ErrorCode::internal, "permutation without a root");
        cf.phase = f.neg(quad(A, *root));
        cf.half_pow = n;
        if (!gp_.ne_even) {
            if (x0_explicit(A, B) != *root)
                throw Error(ErrorCode::internal, "explicit root disagrees with the linear solve");
            cf.branch = WeilBranch::co98_pp_odd;
            cf.sign = ((n - 1) % 2 == 0 ? 1 : -1) * chars_->eta(f.neg(A));
            cf.quarter = (f.p() % 4 == 3) ? static_cast<int>((3 * n) % 4) : 0;
        } else {
            cf.branch = WeilBranch::co98_pp_even;
            cf.sign = (*gp_.t % 2 == 0) ? 1 : -1;
        }
        return finish(cf);
    }
    if (!root) {
        cf.branch = WeilBranch::co98_nonpp_zero;
        cf.sign = 0;
        return finish(cf);
    }
    if (!gp_.ne_even) throw Error(ErrorCode::internal, "non-permutation f with n/e odd");
    cf.branch = WeilBranch::co98_nonpp_root;
    cf.sign = (*gp_.t % 2 == 0) ? -1 : 1;
    cf.half_pow = n + 2 * gp_.e;
    cf.phase = f.neg(quad(A, *root));
    return finish(cf);
}

ClosedForm GoldWeil::gold_form(Fe alpha, Fe beta) const {
    const auto& f = field();
    const Fe A = f.add(alpha, beta);
    const Fe B = f.add(f.frobenius(beta, f.n() - gp_.k), beta);
    ClosedForm cf;
    if (A.is_zero()) {
        if (B.is_zero()) {
            cf.branch = WeilBranch::gold_degenerate_q;
            cf.sign = 1;
            cf.half_pow = 2 * f.n();
            cf.phase = beta;
        } else {
            cf.branch = WeilBranch::gold_degenerate_zero;
            cf.sign = 0;
        }
        return finish(cf);
    }
    cf = coulter_s_form(A, B);
    cf.phase = f.add(cf.phase, beta);
    return cf;
}

WeilValue GoldWeil::coulter_s0(Fe A) const {
    const auto cf = coulter_s0_form(A);
    return {cf.value(*chars_), cf.branch};
}

WeilValue GoldWeil::coulter_s(Fe A, Fe B) const {
    const auto cf = coulter_s_form(A, B);
    return {cf.value(*chars_), cf.branch};
}

WeilValue GoldWeil::gold_s_alpha_beta(Fe alpha, Fe beta) const {
    const auto cf = gold_form(alpha, beta);
    return {cf.value(*chars_), cf.branch};
}

}  // namespace cbct
