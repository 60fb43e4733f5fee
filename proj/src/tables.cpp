#include "cbct/tables.hpp"

#include <omp.h>

#include <algorithm>
#include <random>

namespace cbct {

MonomialSpec MonomialSpec::make(const FieldCtx& ctx, std::uint64_t d) {
    if (d < 1 || d >= ctx.q()) throw Error(ErrorCode::invalid_input, "exponent d must satisfy 1 <= d < q");
    return MonomialSpec{d};
}

CParam CParam::make(const FieldCtx& ctx, Fe c) {
    if (!ctx.contains(c)) throw Error(ErrorCode::invalid_input, "c is not a field element");
    if (c.is_zero()) throw Error(ErrorCode::invalid_input, "c must be nonzero");
    return CParam{c, ctx.inv(c)};
}

PowerTable::PowerTable(const FieldCtx& ctx, const MonomialSpec& spec)
    : ctx_(&ctx), d_(spec.d_exp), val_(ctx.q()), off_(ctx.q() + 1, 0), pre_(ctx.q()) {
    const auto d = static_cast<std::int64_t>(d_);
    for (std::uint32_t x = 0; x < ctx.q(); ++x) {
        val_[x] = ctx.pow(Fe{x}, d).enc;
        ++off_[val_[x] + 1];
    }
    for (std::uint32_t v = 0; v < ctx.q(); ++v) off_[v + 1] += off_[v];
    std::vector<std::uint32_t> fill(off_.begin(), off_.end() - 1);
    for (std::uint32_t x = 0; x < ctx.q(); ++x) pre_[fill[val_[x]]++] = x;
}

std::string_view to_string(TableKind k) { return k == TableKind::ddt ? "ddt" : "bct"; }

std::string_view to_string(EngineKind e) {
    switch (e) {
        case EngineKind::brute: return "brute";
        case EngineKind::char_direct: return "char-direct";
        case EngineKind::char_gold: return "char-gold";
        case EngineKind::case_engine: return "case";
    }
    return "unknown";
}

int resolve_workers(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

namespace {

// Row counts accumulated per thread and merged; integer sums, so the merge
// order cannot change the result.
template <class Body>
std::vector<std::uint64_t> parallel_histogram(std::uint32_t q, std::uint32_t outer, int workers, Body body) {
    std::vector<std::uint64_t> total(q, 0);
#pragma omp parallel num_threads(resolve_workers(workers))
    {
        std::vector<std::uint64_t> local(q, 0);
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(outer); ++i)
            body(static_cast<std::uint32_t>(i), local);
#pragma omp critical
        for (std::uint32_t b = 0; b < q; ++b) total[b] += local[b];
    }
    return total;
}

Uniformity maximize(const TableResult& t, bool skip_a0, bool skip_b0, std::string note) {
    Uniformity u;
    u.domain_note = std::move(note);
    for (std::uint32_t a = skip_a0 ? 1 : 0; a < t.q; ++a) {
        for (std::uint32_t b = skip_b0 ? 1 : 0; b < t.q; ++b) {
            const auto v = t.entries[std::size_t{a} * t.q + b];
            if (v > u.value) {
                u.value = v;
                u.argmax.clear();
            }
            if (v == u.value) u.argmax.emplace_back(Fe{a}, Fe{b});
        }
    }
    return u;
}

}  // namespace

std::uint64_t c_ddt_entry(const PowerTable& pw, const CParam& cp, Fe a, Fe b) {
    const auto& f = pw.field();
    std::uint64_t n = 0;
    for (std::uint32_t x = 0; x < f.q(); ++x) {
        const Fe lhs = f.sub(pw.at(f.add(Fe{x}, a)), f.mul(cp.c, pw.at(Fe{x})));
        n += (lhs == b);
    }
    return n;
}

std::vector<std::uint64_t> c_ddt_row(const PowerTable& pw, const CParam& cp, Fe a) {
    return serial::c_ddt_row(pw, cp, a);
}

TableResult c_ddt_full(const PowerTable& pw, const CParam& cp, int workers) {
    const auto& f = pw.field();
    const std::uint32_t q = f.q();
    TableResult t;
    t.kind = TableKind::ddt;
    t.c = cp;
    t.q = q;
    t.entries.assign(std::size_t{q} * q, 0);
#pragma omp parallel for schedule(static) num_threads(resolve_workers(workers))
    for (std::int64_t a = 0; a < static_cast<std::int64_t>(q); ++a) {
        const auto row = serial::c_ddt_row(pw, cp, Fe{static_cast<std::uint32_t>(a)});
        std::copy(row.begin(), row.end(), t.entries.begin() + a * q);
    }
    t.uniformity = c_ddt_uniformity(t);
    return t;
}

Uniformity c_ddt_uniformity(const TableResult& ddt) {
    const bool c_is_one = ddt.c.c == FieldCtx::one();
    return maximize(ddt, c_is_one, false, c_is_one ? "a != 0" : "all (a, b)");
}

std::uint64_t c_bct_entry(const PowerTable& pw, const CParam& cp, Fe a, Fe b) {
    const auto& f = pw.field();
    std::uint64_t n = 0;
    for (std::uint32_t x = 0; x < f.q(); ++x) {
        const Fe fx = pw.at(Fe{x});
        const Fe fxa = pw.at(f.add(Fe{x}, a));
        const Fe target = f.add(b, f.mul(cp.c, fx));
        const Fe rhs2 = f.add(b, f.mul(cp.c_inv, fxa));
        for (const auto y : pw.preimages(target)) n += (pw.at(f.add(Fe{y}, a)) == rhs2);
    }
    return n;
}

std::uint64_t c_bct_entry_swapped(const PowerTable& pw, const CParam& cp, Fe a, Fe b) {
    // x^d - c y^d = b and (x+a)^d - c^{-1}(y+a)^d = b
    const auto& f = pw.field();
    std::uint64_t n = 0;
    for (std::uint32_t x = 0; x < f.q(); ++x) {
        for (std::uint32_t y = 0; y < f.q(); ++y) {
            const Fe e1 = f.sub(pw.at(Fe{x}), f.mul(cp.c, pw.at(Fe{y})));
            if (e1 != b) continue;
            const Fe e2 = f.sub(pw.at(f.add(Fe{x}, a)), f.mul(cp.c_inv, pw.at(f.add(Fe{y}, a))));
            n += (e2 == b);
        }
    }
    return n;
}

std::vector<std::uint64_t> c_bct_row(const PowerTable& pw, const CParam& cp, Fe a, int workers) {
    const auto& f = pw.field();
    const std::uint32_t q = f.q();
    return parallel_histogram(q, q, workers, [&](std::uint32_t x, std::vector<std::uint64_t>& out) {
        const Fe cfx = f.mul(cp.c, pw.at(Fe{x}));
        const Fe cfxa = f.mul(cp.c_inv, pw.at(f.add(Fe{x}, a)));
        for (std::uint32_t y = 0; y < q; ++y) {
            const Fe b = f.sub(pw.at(Fe{y}), cfx);
            if (f.sub(pw.at(f.add(Fe{y}, a)), cfxa) == b) ++out[b.enc];
        }
    });
}

std::vector<std::uint64_t> c_bct_row1(const PowerTable& pw, const CParam& cp, int workers) {
    return c_bct_row(pw, cp, FieldCtx::one(), workers);
}

TableResult c_bct_from_row1(const PowerTable& pw, const CParam& cp, const std::vector<std::uint64_t>& row1,
                            EngineKind engine, int workers) {
    const auto& f = pw.field();
    const std::uint32_t q = f.q();
    if (row1.size() != q) throw Error(ErrorCode::invalid_input, "row length differs from q");
    TableResult t;
    t.kind = TableKind::bct;
    t.c = cp;
    t.q = q;
    t.engine = engine;
    t.entries.assign(std::size_t{q} * q, 0);
    const auto row0 = c_bct_row(pw, cp, FieldCtx::zero(), workers);
    std::copy(row0.begin(), row0.end(), t.entries.begin());
    const auto d = static_cast<std::int64_t>(pw.d());
#pragma omp parallel for schedule(static) num_threads(resolve_workers(workers))
    for (std::int64_t a = 1; a < static_cast<std::int64_t>(q); ++a) {
        const Fe scale = f.pow(Fe{static_cast<std::uint32_t>(a)}, -d);
        for (std::uint32_t b = 0; b < q; ++b) t.entries[a * q + b] = row1[f.mul(Fe{b}, scale).enc];
    }
    t.uniformity = c_bct_uniformity(t);
    return t;
}

TableResult c_bct_full(const PowerTable& pw, const CParam& cp, int workers, unsigned checks, std::uint64_t seed) {
    const auto& f = pw.field();
    const auto row1 = c_bct_row1(pw, cp, workers);
    auto t = c_bct_from_row1(pw, cp, row1, EngineKind::brute, workers);
    if (f.q() > 1) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::uint32_t> pick_a(1, f.q() - 1), pick_b(0, f.q() - 1);
        for (unsigned i = 0; i < checks; ++i) {
            const Fe a{pick_a(rng)}, b{pick_b(rng)};
            if (c_bct_entry(pw, cp, a, b) != t.at(a, b))
                throw Error(ErrorCode::homogeneity_violation,
                            "entry (" + std::to_string(a.enc) + "," + std::to_string(b.enc) + ")");
        }
    }
    return t;
}

Uniformity c_bct_uniformity(const TableResult& bct) { return maximize(bct, true, true, "a != 0, b != 0"); }

std::vector<std::uint64_t> value_difference_counts(const PowerTable& pw, Fe c) {
    const auto& f = pw.field();
    const std::uint32_t q = f.q();
    std::vector<std::uint64_t> mult(q, 0);
    for (const auto v : pw.values()) ++mult[v];
    std::vector<std::uint64_t> out(q, 0);
    for (std::uint32_t v = 0; v < q; ++v) {
        if (!mult[v]) continue;
        for (std::uint32_t w = 0; w < q; ++w) {
            if (!mult[w]) continue;
            out[f.sub(Fe{v}, f.mul(c, Fe{w})).enc] += mult[v] * mult[w];
        }
    }
    return out;
}

}  // namespace cbct
