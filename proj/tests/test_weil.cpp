#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_support.hpp"

#include <cmath>
#include <map>
#include <set>

#include "cbct/weil.hpp"

using namespace cbct;
using cbct::test::code_of;

namespace {

struct FieldCase {
    std::uint32_t p;
    unsigned n;
};

const std::vector<FieldCase> kCoulterFields{{3, 2}, {5, 2}, {3, 3}, {3, 4}};

}  // namespace

TEST_CASE("Gold parameters") {
    const auto f81 = FieldCtx::build(3, 4);
    const auto gp = GoldParams::make(f81, 2);
    CHECK(gp.e == 2);
    CHECK(gp.d_lin == 4);
    CHECK(gp.ne_even);
    CHECK(gp.m == 2u);
    CHECK(gp.t == 1u);
    CHECK(gp.exponent == 10);
    const auto g1 = GoldParams::make(f81, 1);
    CHECK(g1.e == 1);
    CHECK(g1.t == 2u);

    const auto f27 = FieldCtx::build(3, 3);
    const auto g27 = GoldParams::make(f27, 2);
    CHECK_FALSE(g27.ne_even);
    CHECK_FALSE(g27.m.has_value());
    CHECK(gold_k_for_exponent(f27, 10) == 2u);
    CHECK(gold_k_for_exponent(f27, 4) == 1u);
    CHECK_FALSE(gold_k_for_exponent(f27, 5).has_value());
    CHECK_FALSE(gold_k_for_exponent(f27, 28).has_value());
}

TEST_CASE("sqrt_p_power") {
    CHECK(sqrt_p_power(3, 0) == 1.0);
    CHECK(sqrt_p_power(3, 4) == 9.0);
    CHECK(std::abs(sqrt_p_power(5, 3) - 5.0 * std::sqrt(5.0)) < 1e-12);
}

TEST_CASE("Gauss expansion of S_{a,b} matches direct summation") {
    for (auto [p, n, d] : std::vector<std::tuple<std::uint32_t, unsigned, std::uint64_t>>{
             {3, 2, 3}, {3, 2, 4}, {5, 2, 3}, {5, 2, 6}, {3, 3, 5}, {7, 2, 5}}) {
        const auto f = FieldCtx::build(p, n);
        const Characters ch(f);
        const GaussTable g(ch);
        for (std::uint32_t a = 1; a < f.q(); ++a)
            for (std::uint32_t b = 1; b < f.q(); ++b) {
                const Cx want = s_alpha_beta_direct(ch, d, Fe{a}, Fe{b});
                const Cx got = s_alpha_beta_gauss(ch, g, d, Fe{a}, Fe{b});
                REQUIRE(std::abs(want - got) < 1e-7 * f.q());
            }
        CHECK(code_of([&] { (void)s_alpha_beta_gauss(ch, g, d, Fe{0}, Fe{1}); }) == ErrorCode::zero_coefficient);
    }
}

TEST_CASE("Coulter closed forms match direct S_k(A,B)") {
    for (auto [p, n] : kCoulterFields) {
        const auto f = FieldCtx::build(p, n);
        const Characters ch(f);
        const double tol = 1e-6 * f.q() * std::sqrt(double(f.q()));
        for (unsigned k = 1; k < n; ++k) {
            const GoldWeil w(ch, k);
            std::map<WeilBranch, int> branches;
            for (std::uint32_t A = 1; A < f.q(); ++A)
                for (std::uint32_t B = 0; B < f.q(); ++B) {
                    const auto v = w.coulter_s(Fe{A}, Fe{B});
                    const Cx want = s_k_direct(ch, w.params(), Fe{A}, Fe{B});
                    ++branches[v.branch];
                    REQUIRE_MESSAGE(std::abs(v.value - want) < tol, "p=" << p << " n=" << n << " k=" << k
                                                                         << " A=" << A << " B=" << B);
                }
            CHECK_FALSE(branches.count(WeilBranch::direct));
        }
    }
}

TEST_CASE("S_k(A,0) over F_25 takes the values -5 and 25") {
    const auto f = FieldCtx::build(5, 2);
    const Characters ch(f);
    const GoldWeil w(ch, 1);
    std::map<long, int> hist;
    for (std::uint32_t A = 1; A < f.q(); ++A) {
        const auto v = w.coulter_s0(Fe{A});
        CHECK(std::abs(v.value.imag()) < 1e-9);
        CHECK(std::abs(v.value - w.coulter_s(Fe{A}, Fe{0}).value) < 1e-9);
        ++hist[std::lround(v.value.real())];
        const bool special = v.branch == WeilBranch::co98_1_even_special;
        CHECK(special == w.norm_special(Fe{A}));
    }
    // sum over A != 0 of S_k(A, 0) is 0, and A^4 = -1 has four solutions.
    CHECK(hist.size() == 2);
    CHECK(hist[-5] == 20);
    CHECK(hist[25] == 4);
}

TEST_CASE("Gold S_{a,b} closed forms match direct summation") {
    for (auto [p, n] : std::vector<FieldCase>{{3, 2}, {5, 2}, {3, 3}, {7, 2}, {3, 4}}) {
        const auto f = FieldCtx::build(p, n);
        const Characters ch(f);
        for (unsigned k = 1; k < n; ++k) {
            const GoldWeil w(ch, k);
            for (std::uint32_t a = 0; a < f.q(); ++a)
                for (std::uint32_t b = 0; b < f.q(); ++b) {
                    const Cx want = s_alpha_beta_direct(ch, w.params().exponent, Fe{a}, Fe{b});
                    REQUIRE(std::abs(w.gold_s_alpha_beta(Fe{a}, Fe{b}).value - want) < 1e-7 * f.q());
                }
        }
    }
}

TEST_CASE("explicit root agrees with the linear solver when n/e is odd") {
    for (auto [p, n] : std::vector<FieldCase>{{3, 3}, {5, 3}, {3, 5}}) {
        const auto f = FieldCtx::build(p, n);
        const Characters ch(f);
        for (unsigned k = 1; k < n; ++k) {
            const GoldWeil w(ch, k);
            REQUIRE_FALSE(w.params().ne_even);
            for (std::uint32_t A = 1; A < f.q(); A += 3) {
                const auto fm = w.coulter_map(Fe{A});
                CHECK(fm.is_permutation());
                for (std::uint32_t B = 0; B < f.q(); B += 5) {
                    const auto r = w.coulter_root(fm, Fe{B});
                    REQUIRE(r.has_value());
                    CHECK(*r == w.x0_explicit(Fe{A}, Fe{B}));
                }
            }
        }
    }
}

TEST_CASE("norm criterion for L_{a,b} agrees with the matrix rank") {
    for (auto [p, n] : std::vector<FieldCase>{{3, 3}, {5, 2}, {3, 4}}) {
        const auto f = FieldCtx::build(p, n);
        const Characters ch(f);
        for (unsigned k = 1; k < n; ++k) {
            const GoldWeil w(ch, k);
            for (std::uint32_t a = 0; a < f.q(); ++a)
                for (std::uint32_t b = 0; b < f.q(); ++b) {
                    if (f.add(Fe{a}, Fe{b}).is_zero()) {
                        CHECK(code_of([&] { (void)w.lab_is_permutation(Fe{a}, Fe{b}); }) ==
                              ErrorCode::zero_lead_coefficient);
                        continue;
                    }
                    REQUIRE(w.lab_is_permutation(Fe{a}, Fe{b}) == w.lab_map(Fe{a}, Fe{b}).is_permutation());
                }
        }
    }
}

TEST_CASE("fault injection negates exactly one branch") {
    const auto f = FieldCtx::build(3, 3);
    const Characters ch(f);
    const GoldWeil w(ch, 1);
    const auto clean = w.coulter_s(Fe{2}, Fe{5});
    REQUIRE(clean.branch == WeilBranch::co98_pp_odd);
    set_fault_injection(WeilBranch::co98_pp_odd);
    CHECK(fault_injection() == WeilBranch::co98_pp_odd);
    CHECK(std::abs(w.coulter_s(Fe{2}, Fe{5}).value + clean.value) < 1e-9);
    set_fault_injection(WeilBranch::co98_1_odd);
    CHECK(std::abs(w.coulter_s(Fe{2}, Fe{5}).value - clean.value) < 1e-9);
    set_fault_injection(std::nullopt);
    CHECK(std::abs(w.coulter_s(Fe{2}, Fe{5}).value - clean.value) < 1e-9);
}

TEST_CASE("branch names are distinct") {
    std::set<std::string_view> names;
    for (int i = 0; i <= static_cast<int>(WeilBranch::gold_degenerate_zero); ++i)
        names.insert(to_string(static_cast<WeilBranch>(i)));
    CHECK(names.size() == 10);
}
