#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_support.hpp"

#include <algorithm>
#include <numeric>

#include "cbct/tables.hpp"

using namespace cbct;
using cbct::test::code_of;

namespace {

// Counts straight from the definitions, quadratic loops over (x, y).
std::uint64_t ddt_ref(const FieldCtx& f, std::uint64_t d, Fe c, Fe a, Fe b) {
    std::uint64_t n = 0;
    for (std::uint32_t x = 0; x < f.q(); ++x) {
        const Fe lhs = f.sub(f.pow(f.add(Fe{x}, a), d), f.mul(c, f.pow(Fe{x}, d)));
        n += lhs == b;
    }
    return n;
}

std::uint64_t bct_ref(const FieldCtx& f, std::uint64_t d, Fe c, Fe a, Fe b) {
    const Fe ci = f.inv(c);
    std::uint64_t n = 0;
    for (std::uint32_t x = 0; x < f.q(); ++x)
        for (std::uint32_t y = 0; y < f.q(); ++y) {
            const Fe X{x}, Y{y};
            if (f.sub(f.pow(Y, d), f.mul(c, f.pow(X, d))) != b) continue;
            n += f.sub(f.pow(f.add(Y, a), d), f.mul(ci, f.pow(f.add(X, a), d))) == b;
        }
    return n;
}

}  // namespace

TEST_CASE("argument validation") {
    const auto f = FieldCtx::build(3, 2);
    CHECK(code_of([&] { (void)MonomialSpec::make(f, 0); }) == ErrorCode::invalid_input);
    CHECK(code_of([&] { (void)MonomialSpec::make(f, 9); }) == ErrorCode::invalid_input);
    CHECK(code_of([&] { (void)CParam::make(f, Fe{0}); }) == ErrorCode::invalid_input);
    const auto cp = CParam::make(f, Fe{5});
    CHECK(f.mul(cp.c, cp.c_inv) == FieldCtx::one());
}

TEST_CASE("power table and preimages") {
    const auto f = FieldCtx::build(5, 2);
    const PowerTable pw(f, MonomialSpec::make(f, 6));
    std::uint64_t total = 0;
    for (std::uint32_t v = 0; v < f.q(); ++v) {
        for (auto y : pw.preimages(Fe{v})) CHECK(pw.at(Fe{y}) == Fe{v});
        total += pw.preimages(Fe{v}).size();
    }
    CHECK(total == f.q());
    CHECK(pw.preimages(Fe{0}).size() == 1);
}

TEST_CASE("entries agree with the definitions") {
    for (auto [p, n, d] : std::vector<std::tuple<std::uint32_t, unsigned, std::uint64_t>>{
             {3, 2, 4}, {3, 2, 5}, {2, 4, 3}, {5, 1, 3}, {3, 3, 10}}) {
        const auto f = FieldCtx::build(p, n);
        const PowerTable pw(f, MonomialSpec::make(f, d));
        for (std::uint32_t c = 1; c < f.q(); c += (f.q() > 10 ? 5 : 1)) {
            const auto cp = CParam::make(f, Fe{c});
            for (std::uint32_t a = 0; a < f.q(); a += 2)
                for (std::uint32_t b = 0; b < f.q(); b += 3) {
                    CHECK(c_ddt_entry(pw, cp, Fe{a}, Fe{b}) == ddt_ref(f, d, Fe{c}, Fe{a}, Fe{b}));
                    const auto ref = bct_ref(f, d, Fe{c}, Fe{a}, Fe{b});
                    CHECK(c_bct_entry(pw, cp, Fe{a}, Fe{b}) == ref);
                    CHECK(c_bct_entry_swapped(pw, cp, Fe{a}, Fe{b}) == ref);
                }
        }
    }
}

TEST_CASE("DDT rows sum to q and match the serial reference") {
    for (auto [p, n, d] : std::vector<std::tuple<std::uint32_t, unsigned, std::uint64_t>>{
             {3, 3, 4}, {5, 2, 7}, {2, 5, 3}, {7, 2, 8}}) {
        const auto f = FieldCtx::build(p, n);
        const PowerTable pw(f, MonomialSpec::make(f, d));
        for (std::uint32_t c = 1; c < f.q(); c += 3) {
            const auto cp = CParam::make(f, Fe{c});
            const auto t = c_ddt_full(pw, cp, 4);
            for (std::uint32_t a = 0; a < f.q(); ++a) {
                std::uint64_t s = 0;
                for (std::uint32_t b = 0; b < f.q(); ++b) s += t.at(Fe{a}, Fe{b});
                CHECK(s == f.q());
                const auto row = serial::c_ddt_row(pw, cp, Fe{a});
                CHECK(std::equal(row.begin(), row.end(), t.entries.begin() + std::size_t{a} * f.q()));
            }
        }
    }
}

TEST_CASE("DDT uniformity excludes a = 0 only for c = 1") {
    const auto f = FieldCtx::build(3, 2);
    const PowerTable pw(f, MonomialSpec::make(f, 2));
    const auto t1 = c_ddt_full(pw, CParam::make(f, FieldCtx::one()));
    CHECK(t1.uniformity.value < f.q());
    for (auto [a, b] : t1.uniformity.argmax) CHECK_FALSE(a.is_zero());
    const auto t2 = c_ddt_full(pw, CParam::make(f, Fe{2}));
    CHECK(t2.uniformity.value == c_ddt_uniformity(t2).value);
}

TEST_CASE("BCT rows: parallel, serial and homogeneity") {
    for (auto [p, n, d] : std::vector<std::tuple<std::uint32_t, unsigned, std::uint64_t>>{
             {3, 2, 4}, {5, 2, 3}, {3, 3, 10}, {2, 5, 3}, {7, 2, 8}}) {
        const auto f = FieldCtx::build(p, n);
        const PowerTable pw(f, MonomialSpec::make(f, d));
        for (std::uint32_t c = 1; c < f.q(); c += 2) {
            const auto cp = CParam::make(f, Fe{c});
            const auto row1 = c_bct_row1(pw, cp, 3);
            const auto full = c_bct_full(pw, cp, 3);
            const auto hom = c_bct_from_row1(pw, cp, row1, EngineKind::brute, 3);
            CHECK(full.entries == hom.entries);
            for (std::uint32_t a = 0; a < f.q(); a += 3) {
                const auto par = c_bct_row(pw, cp, Fe{a}, 4);
                CHECK(par == serial::c_bct_row(pw, cp, Fe{a}));
                CHECK(std::equal(par.begin(), par.end(), full.entries.begin() + std::size_t{a} * f.q()));
            }
            CHECK(full.uniformity.value == c_bct_uniformity(full).value);
            for (auto [a, b] : full.uniformity.argmax) {
                CHECK_FALSE(a.is_zero());
                CHECK_FALSE(b.is_zero());
                CHECK(full.at(a, b) == full.uniformity.value);
            }
        }
    }
}

TEST_CASE("tables built from row 1 validate the row length") {
    const auto f = FieldCtx::build(5, 2);
    const PowerTable pw(f, MonomialSpec::make(f, 6));
    const auto cp = CParam::make(f, Fe{7});
    auto row1 = c_bct_row1(pw, cp);
    const auto t = c_bct_from_row1(pw, cp, row1, EngineKind::brute);
    CHECK(t.entries.size() == std::size_t{f.q()} * f.q());
    CHECK(code_of([&] { (void)c_bct_from_row1(pw, cp, std::vector<std::uint64_t>(3, 0), EngineKind::brute); }) ==
          ErrorCode::invalid_input);
}

TEST_CASE("worker count does not change results") {
    const auto f = FieldCtx::build(3, 4);
    const PowerTable pw(f, MonomialSpec::make(f, 10));
    const auto cp = CParam::make(f, Fe{11});
    const auto one = c_bct_full(pw, cp, 1);
    for (int w : {2, 3, 8}) {
        const auto many = c_bct_full(pw, cp, w);
        CHECK(one.entries == many.entries);
        CHECK(one.uniformity.argmax == many.uniformity.argmax);
        CHECK(c_ddt_full(pw, cp, 1).entries == c_ddt_full(pw, cp, w).entries);
    }
    CHECK(resolve_workers(1) == 1);
    CHECK(resolve_workers(0) >= 1);
}

TEST_CASE("value difference counts cover all pairs") {
    const auto f = FieldCtx::build(3, 3);
    const PowerTable pw(f, MonomialSpec::make(f, 4));
    for (std::uint32_t c : {1u, 2u, 17u}) {
        const auto m = value_difference_counts(pw, Fe{c});
        CHECK(std::accumulate(m.begin(), m.end(), std::uint64_t{0}) == std::uint64_t{f.q()} * f.q());
    }
}

TEST_CASE("binary Gold uniformities") {
    const auto f32 = FieldCtx::build(2, 5);
    const PowerTable x3(f32, MonomialSpec::make(f32, 3));
    const auto one32 = CParam::make(f32, FieldCtx::one());
    CHECK(c_bct_full(x3, one32).uniformity.value == 2);
    CHECK(c_ddt_full(x3, one32).uniformity.value == 2);

    const auto f64 = FieldCtx::build(2, 6);
    const PowerTable x5(f64, MonomialSpec::make(f64, 5));
    const auto one64 = CParam::make(f64, FieldCtx::one());
    CHECK(c_bct_full(x5, one64).uniformity.value == 4);
    CHECK(c_ddt_full(x5, one64).uniformity.value == 4);
}
