#include "cbct/field.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace cbct {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::non_prime_p: return "NonPrimeP";
        case ErrorCode::reducible_modulus: return "ReducibleModulus";
        case ErrorCode::invalid_modulus: return "InvalidModulus";
        case ErrorCode::field_too_large: return "FieldTooLarge";
        case ErrorCode::division_by_zero: return "DivisionByZero";
        case ErrorCode::degree_not_dividing: return "DegreeNotDividing";
        case ErrorCode::even_characteristic: return "EvenCharacteristic";
        case ErrorCode::zero_coefficient: return "ZeroCoefficient";
        case ErrorCode::zero_a: return "ZeroA";
        case ErrorCode::zero_lead_coefficient: return "ZeroLeadCoefficient";
        case ErrorCode::not_a_gold_exponent: return "NotAGoldExponent";
        case ErrorCode::rounding_tolerance_exceeded: return "RoundingToleranceExceeded";
        case ErrorCode::homogeneity_violation: return "HomogeneityViolation";
        case ErrorCode::precondition_violated: return "PreconditionViolated";
        case ErrorCode::unsupported_engine: return "UnsupportedEngine";
        case ErrorCode::invalid_input: return "InvalidInput";
        case ErrorCode::internal: return "InternalError";
    }
    return "Unknown";
}

bool is_prime(std::uint64_t v) {
    if (v < 2) return false;
    for (std::uint64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= v; ++d) {
        if (v % d == 0) {
            out.push_back(d);
            while (v % d == 0) v /= d;
        }
    }
    if (v > 1) out.push_back(v);
    return out;
}

namespace {

constexpr std::uint32_t kZechNone = std::numeric_limits<std::uint32_t>::max();

using Poly = std::vector<std::uint64_t>;  // coefficients mod p, constant first

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) { return pow_mod(a, p - 2, p); }

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// a mod f, f monic.
Poly poly_mod(Poly a, const Poly& f, std::uint64_t p) {
    trim(a);
    const std::size_t df = f.size() - 1;
    while (a.size() > df) {
        const std::uint64_t lead = a.back();
        const std::size_t shift = a.size() - 1 - df;
        for (std::size_t i = 0; i <= df; ++i) a[shift + i] = (a[shift + i] + (p - lead) * f[i]) % p;
        trim(a);
    }
    return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    return poly_mod(std::move(r), f, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, std::uint64_t p) {
    Poly r{1};
    base = poly_mod(std::move(base), f, p);
    while (e) {
        if (e & 1) r = poly_mulmod(r, base, f, p);
        base = poly_mulmod(base, base, f, p);
        e >>= 1;
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // make b monic, then reduce a mod b
        const std::uint64_t li = inv_mod(b.back(), p);
        for (auto& c : b) c = c * li % p;
        a = poly_mod(std::move(a), b, p);
        std::swap(a, b);
    }
    return a;
}

// Rabin's test: f | x^{p^n} - x and gcd(x^{p^{n/r}} - x, f) = 1 for every prime r | n.
bool is_irreducible(const Poly& f, std::uint64_t p) {
    const auto n = static_cast<unsigned>(f.size() - 1);
    if (n == 1) return true;
    // Cheap screen: a root in F_p means a linear factor.
    if (p <= 64) {
        for (std::uint64_t a = 0; a < p; ++a) {
            std::uint64_t v = 0;
            for (std::size_t i = f.size(); i-- > 0;) v = (v * a + f[i]) % p;
            if (v == 0) return false;
        }
    } else if (f[0] == 0) {
        return false;
    }
    std::vector<Poly> frob(n + 1);
    frob[0] = poly_mod(Poly{0, 1}, f, p);
    for (unsigned i = 1; i <= n; ++i) frob[i] = poly_powmod(frob[i - 1], p, f, p);
    auto minus_x = [&](Poly h) {
        h.resize(std::max<std::size_t>(h.size(), 2), 0);
        h[1] = (h[1] + p - 1) % p;
        trim(h);
        return h;
    };
    if (!minus_x(frob[n]).empty()) return false;
    for (auto r : prime_factors(n)) {
        const Poly g = poly_gcd(minus_x(frob[n / r]), f, p);
        if (g.size() != 1) return false;
    }
    return true;
}

Poly to_poly(std::uint32_t enc, std::uint32_t p, unsigned n) {
    Poly out(n, 0);
    for (unsigned i = 0; i < n; ++i) {
        out[i] = enc % p;
        enc /= p;
    }
    trim(out);
    return out;
}

}  // namespace

FieldCtx FieldCtx::build(std::uint32_t p, unsigned n,
                         const std::optional<std::vector<std::uint32_t>>& modulus, std::uint64_t max_q) {
    if (!is_prime(p)) throw Error(ErrorCode::non_prime_p, "p = " + std::to_string(p) + " is not prime");
    if (n < 1) throw Error(ErrorCode::invalid_input, "extension degree must be >= 1");
    std::uint64_t q = 1;
    for (unsigned i = 0; i < n; ++i) {
        q *= p;
        if (q > max_q)
            throw Error(ErrorCode::field_too_large,
                        "q = " + std::to_string(p) + "^" + std::to_string(n) + " exceeds the cap " +
                            std::to_string(max_q));
    }

    Poly f;
    if (modulus) {
        const auto& m = *modulus;
        if (m.size() != n + 1 || m.back() != 1)
            throw Error(ErrorCode::invalid_modulus, "modulus must be monic of degree " + std::to_string(n));
        for (auto c : m)
            if (c >= p) throw Error(ErrorCode::invalid_modulus, "modulus coefficient out of range");
        f.assign(m.begin(), m.end());
        if (!is_irreducible(f, p)) throw Error(ErrorCode::reducible_modulus, "modulus is reducible over F_p");
    } else {
        // Enumerate tails with c_0 as the most significant digit.
        const std::uint64_t count = q;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            Poly cand(n + 1, 0);
            std::uint64_t v = idx;
            for (unsigned i = n; i-- > 0;) {
                cand[i] = v % p;
                v /= p;
            }
            cand[n] = 1;
            if (is_irreducible(cand, p)) {
                f = std::move(cand);
                break;
            }
        }
        if (f.empty()) throw Error(ErrorCode::internal, "no irreducible polynomial found");
    }

    FieldCtx ctx;
    ctx.p_ = p;
    ctx.n_ = n;
    ctx.q_ = static_cast<std::uint32_t>(q);
    ctx.modulus_.assign(f.begin(), f.end());
    ctx.build_tables();
    return ctx;
}

void FieldCtx::build_tables() {
    const Poly f(modulus_.begin(), modulus_.end());
    const std::uint32_t ord = order();

    pow_p_.resize(n_);
    std::uint64_t pp = 1;
    for (unsigned i = 0; i < n_; ++i, pp *= p_) pow_p_[i] = static_cast<std::uint32_t>(pp);

    // smallest enc of full multiplicative order
    const auto factors = prime_factors(ord);
    bool found = false;
    for (std::uint32_t cand = 1; cand < q_ && !found; ++cand) {
        const Poly g = to_poly(cand, p_, n_);
        bool full = true;
        for (auto r : factors) {
            const Poly h = poly_powmod(g, ord / r, f, p_);
            if (h.size() == 1 && h[0] == 1) {
                full = false;
                break;
            }
        }
        if (full) {
            generator_ = Fe{cand};
            found = true;
        }
    }
    if (!found) throw Error(ErrorCode::internal, "no generator of the multiplicative group");

    exp_.assign(2 * static_cast<std::size_t>(ord), 0);
    log_.assign(q_, 0);
    std::vector<bool> seen(q_, false);
    // Powers of g on fixed digit arrays: multiply by g as a sum of shifted copies.
    Poly g = to_poly(generator_.enc, p_, n_);
    std::vector<std::uint64_t> cur(n_, 0), acc(n_), t(n_);
    cur[0] = 1;
    auto times_x = [&](std::vector<std::uint64_t>& v) {
        const std::uint64_t top = v[n_ - 1];
        for (unsigned j = n_ - 1; j > 0; --j) v[j] = (v[j - 1] + (p_ - top) * f[j]) % p_;
        v[0] = ((p_ - top) * f[0]) % p_;
    };
    for (std::uint32_t k = 0; k < ord; ++k) {
        std::uint64_t enc = 0;
        for (unsigned j = n_; j-- > 0;) enc = enc * p_ + cur[j];
        if (enc == 0 || seen[enc]) throw Error(ErrorCode::internal, "generator powers repeat");
        seen[enc] = true;
        exp_[k] = static_cast<std::uint32_t>(enc);
        exp_[k + ord] = static_cast<std::uint32_t>(enc);
        log_[enc] = k;
        std::fill(acc.begin(), acc.end(), 0);
        t = cur;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i])
                for (unsigned j = 0; j < n_; ++j) acc[j] = (acc[j] + g[i] * t[j]) % p_;
            if (i + 1 < g.size()) times_x(t);
        }
        cur.swap(acc);
    }

    neg_one_log_ = (p_ == 2) ? 0 : ord / 2;

    zech_.assign(ord, kZechNone);
    for (std::uint32_t k = 0; k < ord; ++k) {
        const std::uint32_t v = exp_[k];
        const std::uint32_t w = (v % p_ == p_ - 1) ? v - (p_ - 1) : v + 1;  // 1 + g^k
        zech_[k] = (w == 0) ? kZechNone : log_[w];
    }

    // Tr(x^j) for the basis, then extend F_p-linearly.
    std::vector<std::uint32_t> basis_trace(n_);
    for (unsigned j = 0; j < n_; ++j) {
        Fe acc{0};
        for (unsigned i = 0; i < n_; ++i) acc = add(acc, frobenius(Fe{pow_p_[j]}, i));
        if (acc.enc >= p_) throw Error(ErrorCode::internal, "trace left the prime field");
        basis_trace[j] = acc.enc;
    }
    trace_.assign(q_, 0);
    for (std::uint32_t x = 0; x < q_; ++x) {
        std::uint64_t t = 0;
        std::uint32_t v = x;
        for (unsigned j = 0; j < n_; ++j) {
            t += static_cast<std::uint64_t>(v % p_) * basis_trace[j];
            v /= p_;
        }
        trace_[x] = static_cast<std::uint32_t>(t % p_);
    }
}

Fe FieldCtx::from_int(std::int64_t v) const {
    const auto pm = static_cast<std::int64_t>(p_);
    return Fe{static_cast<std::uint32_t>(((v % pm) + pm) % pm)};
}

Fe FieldCtx::add(Fe a, Fe b) const {
    if (a.enc == 0) return b;
    if (b.enc == 0) return a;
    const std::uint32_t la = log_[a.enc];
    const std::uint32_t lb = log_[b.enc];
    const std::uint32_t d = (lb >= la) ? lb - la : lb + order() - la;
    const std::uint32_t z = zech_[d];
    if (z == kZechNone) return Fe{0};
    return Fe{exp_[la + z]};
}

Fe FieldCtx::neg(Fe a) const {
    if (a.enc == 0 || p_ == 2) return a;
    return Fe{exp_[log_[a.enc] + neg_one_log_]};
}

Fe FieldCtx::inv(Fe a) const {
    if (a.enc == 0) throw Error(ErrorCode::division_by_zero, "inverse of 0");
    const std::uint32_t l = log_[a.enc];
    return Fe{exp_[l == 0 ? 0 : order() - l]};
}

Fe FieldCtx::pow(Fe a, std::int64_t e) const {
    if (a.enc == 0) {
        if (e > 0) return Fe{0};
        if (e == 0) return Fe{1};
        throw Error(ErrorCode::division_by_zero, "negative power of 0");
    }
    const auto ord = static_cast<std::int64_t>(order());
    const auto em = static_cast<std::uint64_t>(((e % ord) + ord) % ord);
    return Fe{exp_[(static_cast<std::uint64_t>(log_[a.enc]) * em) % order()]};
}

Fe FieldCtx::frobenius(Fe x, std::int64_t i) const {
    if (x.enc == 0) return x;
    const auto nn = static_cast<std::int64_t>(n_);
    const auto r = static_cast<unsigned>(((i % nn) + nn) % nn);
    const std::uint64_t e = pow_p_[r] % order();
    return Fe{exp_[(static_cast<std::uint64_t>(log_[x.enc]) * e) % order()]};
}

Fe FieldCtx::rel_norm(Fe x, unsigned d) const {
    if (d == 0 || n_ % d != 0)
        throw Error(ErrorCode::degree_not_dividing,
                    std::to_string(d) + " does not divide " + std::to_string(n_));
    if (x.enc == 0) return x;
    std::uint64_t pd = 1;
    for (unsigned i = 0; i < d; ++i) pd *= p_;
    return pow(x, static_cast<std::int64_t>(order() / (pd - 1)));
}

std::uint32_t FieldCtx::log(Fe x) const {
    if (x.enc == 0) throw Error(ErrorCode::precondition_violated, "log of 0");
    return log_[x.enc];
}

std::vector<std::uint32_t> FieldCtx::digits(Fe x) const {
    std::vector<std::uint32_t> out(n_);
    std::uint32_t v = x.enc;
    for (unsigned i = 0; i < n_; ++i) {
        out[i] = v % p_;
        v /= p_;
    }
    return out;
}

Fe FieldCtx::from_digits(std::span<const std::uint32_t> d) const {
    std::uint64_t enc = 0;
    for (std::size_t i = d.size(); i-- > 0;) enc = enc * p_ + (d[i] % p_);
    return Fe{static_cast<std::uint32_t>(enc)};
}

Fe FieldCtx::add_digitwise(Fe a, Fe b) const {
    auto da = digits(a);
    const auto db = digits(b);
    for (unsigned i = 0; i < n_; ++i) da[i] = (da[i] + db[i]) % p_;
    return from_digits(da);
}

std::string FieldCtx::modulus_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = modulus_.size(); i-- > 0;) {
        const auto c = modulus_[i];
        if (c == 0) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0) {
            os << c;
            continue;
        }
        if (c != 1) os << c;
        os << "x";
        if (i > 1) os << "^" << i;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// LinMap

LinMap LinMap::build(const FieldCtx& ctx, std::vector<LinTerm> terms) {
    LinMap m;
    m.p_ = ctx.p();
    m.n_ = ctx.n();
    for (auto& t : terms) {
        if (!ctx.contains(t.coeff)) throw Error(ErrorCode::invalid_input, "coefficient outside the field");
        t.frob %= ctx.n();
    }
    m.terms_ = std::move(terms);

    const unsigned n = m.n_;
    const std::uint64_t p = m.p_;
    m.matrix_.assign(static_cast<std::size_t>(n) * n, 0);
    std::uint32_t basis = 1;
    for (unsigned j = 0; j < n; ++j, basis *= ctx.p()) {
        const auto col = ctx.digits(m.apply(ctx, Fe{basis}));
        for (unsigned i = 0; i < n; ++i) m.matrix_[i * n + j] = col[i];
    }

    m.rref_ = m.matrix_;
    m.transform_.assign(static_cast<std::size_t>(n) * n, 0);
    for (unsigned i = 0; i < n; ++i) m.transform_[i * n + i] = 1;
    auto& a = m.rref_;
    auto& t = m.transform_;
    auto row_op = [&](std::vector<std::uint32_t>& mat, unsigned dst, unsigned src, std::uint64_t factor) {
        // dst -= factor * src
        for (unsigned c = 0; c < n; ++c)
            mat[dst * n + c] =
                static_cast<std::uint32_t>((mat[dst * n + c] + (p - factor) * mat[src * n + c]) % p);
    };
    unsigned r = 0;
    for (unsigned col = 0; col < n && r < n; ++col) {
        unsigned piv = r;
        while (piv < n && a[piv * n + col] == 0) ++piv;
        if (piv == n) continue;
        if (piv != r) {
            for (unsigned c = 0; c < n; ++c) {
                std::swap(a[piv * n + c], a[r * n + c]);
                std::swap(t[piv * n + c], t[r * n + c]);
            }
        }
        const std::uint64_t s = inv_mod(a[r * n + col], p);
        for (unsigned c = 0; c < n; ++c) {
            a[r * n + c] = static_cast<std::uint32_t>(a[r * n + c] * s % p);
            t[r * n + c] = static_cast<std::uint32_t>(t[r * n + c] * s % p);
        }
        for (unsigned i = 0; i < n; ++i) {
            if (i == r || a[i * n + col] == 0) continue;
            const std::uint64_t fct = a[i * n + col];
            row_op(a, i, r, fct);
            row_op(t, i, r, fct);
        }
        m.pivots_.push_back(col);
        ++r;
    }
    m.rank_ = r;
    return m;
}

Fe LinMap::apply(const FieldCtx& ctx, Fe x) const {
    Fe acc{0};
    for (const auto& t : terms_) acc = ctx.add(acc, ctx.mul(t.coeff, ctx.frobenius(x, t.frob)));
    return acc;
}

Fe LinMap::apply_matrix(const FieldCtx& ctx, Fe x) const {
    const auto v = ctx.digits(x);
    std::vector<std::uint32_t> out(n_, 0);
    for (unsigned i = 0; i < n_; ++i) {
        std::uint64_t s = 0;
        for (unsigned j = 0; j < n_; ++j) s += static_cast<std::uint64_t>(matrix_[i * n_ + j]) * v[j];
        out[i] = static_cast<std::uint32_t>(s % p_);
    }
    return ctx.from_digits(out);
}

std::optional<Fe> LinMap::solve(const FieldCtx& ctx, Fe rhs) const {
    const auto v = ctx.digits(rhs);
    std::vector<std::uint32_t> y(n_, 0);
    for (unsigned i = 0; i < n_; ++i) {
        std::uint64_t s = 0;
        for (unsigned j = 0; j < n_; ++j) s += static_cast<std::uint64_t>(transform_[i * n_ + j]) * v[j];
        y[i] = static_cast<std::uint32_t>(s % p_);
    }
    for (unsigned i = rank_; i < n_; ++i)
        if (y[i] != 0) return std::nullopt;
    // Columns are ordered least significant digit first, so each pivot depends
    // only on more significant free digits; zero free digits give the minimum.
    std::vector<std::uint32_t> x(n_, 0);
    for (unsigned r = 0; r < rank_; ++r) x[pivots_[r]] = y[r];
    return ctx.from_digits(x);
}

std::vector<Fe> LinMap::kernel(const FieldCtx& ctx) const {
    std::vector<bool> is_pivot(n_, false);
    for (unsigned r = 0; r < rank_; ++r) is_pivot[pivots_[r]] = true;
    std::vector<std::vector<std::uint32_t>> basis;
    for (unsigned f = 0; f < n_; ++f) {
        if (is_pivot[f]) continue;
        std::vector<std::uint32_t> v(n_, 0);
        v[f] = 1;
        for (unsigned r = 0; r < rank_; ++r) v[pivots_[r]] = (p_ - rref_[r * n_ + f]) % p_;
        basis.push_back(std::move(v));
    }
    std::vector<Fe> out;
    std::vector<std::uint32_t> coef(basis.size(), 0);
    while (true) {
        std::vector<std::uint32_t> v(n_, 0);
        for (std::size_t b = 0; b < basis.size(); ++b)
            for (unsigned i = 0; i < n_; ++i)
                v[i] = static_cast<std::uint32_t>((v[i] + static_cast<std::uint64_t>(coef[b]) * basis[b][i]) % p_);
        out.push_back(ctx.from_digits(v));
        std::size_t b = 0;
        while (b < coef.size() && ++coef[b] == p_) coef[b++] = 0;
        if (b == coef.size()) break;
    }
    return out;
}

std::vector<Fe> LinMap::solve_all(const FieldCtx& ctx, Fe rhs) const {
    const auto x0 = solve(ctx, rhs);
    if (!x0) return {};
    auto ker = kernel(ctx);
    for (auto& k : ker) k = ctx.add(k, *x0);
    return ker;
}

}  // namespace cbct
