#pragma once

// Character-sum evaluation of c-BCT entries at a = 1:
//   B(1,b) = (M_c(b) + M_{c^-1}(b))/q - 1 + T_b/q^2,
//   T_b = sum_{ab != 0} chi_1(-b(a+b')) S_{a,b'} S_{-ac,-b'c^-1},
// where M_c(b) = #{(x,y) : F(y) - cF(x) = b}. The older assembly with
// (Delta_c(1,b) + Delta_{c^-1}(1,b))/q + 1 is kept as Assembly::ddt_terms.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cbct/characters.hpp"
#include "cbct/tables.hpp"
#include "cbct/weil.hpp"

namespace cbct {

enum class SumEngine { direct, gauss, gold_closed };
enum class Assembly { pair_counts, ddt_terms };
enum class TheoremVariant { statement, proof, corrected };
enum class SetReading { literal, coulter };

std::string_view to_string(SumEngine e);
std::string_view to_string(Assembly a);
std::string_view to_string(TheoremVariant v);
std::string_view to_string(SetReading r);

// S_{a,b} for every (a, b) in F_q^2, row-major by a.
class SMemo {
public:
    SMemo(const Characters& chars, SumEngine engine, std::vector<Cx> values)
        : chars_(&chars), q_(chars.field().q()), engine_(engine), values_(std::move(values)) {}

    static SMemo build(const Characters& chars, const MonomialSpec& spec, SumEngine engine, int workers = 0);
    Cx at(Fe alpha, Fe beta) const { return values_[std::size_t{alpha.enc} * q_ + beta.enc]; }
    SumEngine engine() const { return engine_; }
    const Characters& characters() const { return *chars_; }

private:
    const Characters* chars_;
    std::uint32_t q_ = 0;
    SumEngine engine_ = SumEngine::direct;
    std::vector<Cx> values_;
};

// gold_form for every (a, b) in F_q^2.
class FormMemo {
public:
    static FormMemo build(const GoldWeil& weil, int workers = 0);
    const ClosedForm& at(Fe alpha, Fe beta) const { return forms_[std::size_t{alpha.enc} * q_ + beta.enc]; }
    const GoldWeil& weil() const { return *weil_; }

private:
    const GoldWeil* weil_ = nullptr;
    std::uint32_t q_ = 0;
    std::vector<ClosedForm> forms_;
};

struct TbPart {
    std::string label;
    Cx value;
    std::uint64_t count = 0;  // pairs in the stratum, where meaningful
};

struct TbParts {
    Cx T_b;
    std::vector<TbPart> parts;  // additive pieces of T_b
    std::vector<TbPart> aux;    // auxiliary sums such as Sigma_1, not added in
    TheoremVariant variant = TheoremVariant::corrected;
    SetReading reading = SetReading::coulter;

    Cx sum_of_parts() const;
};

// T_b for every b from an S memo, index-ordered and worker-count independent.
std::vector<Cx> tb_product_all(const SMemo& memo, const CParam& cp, int workers = 0);
Cx tb_product(const SMemo& memo, const CParam& cp, Fe b);

// Region-table evaluation: each S is a closed form, each product an integer
// weight times chi_1(phase), accumulated exactly per (p-power, i-power, trace).
// One part per (branch, branch) stratum.
TbParts gold_Tb_general(const FormMemo& forms, const CParam& cp, Fe b);

// Classification of (a, b) with A = a + b, B = b^{p^{n-k}} + b.
struct PairClass {
    enum Kind : std::uint8_t { a_zero, b_zero, perm, nonperm_root, nonperm_none };
    Kind kind = a_zero;
    Fe root{};  // valid for perm and nonperm_root
};

// Y1 / A1 / complement of Y1 over F_q^2. Under SetReading::literal the sets
// follow L_{a,b} and its root of L(x) = -(b^{p^k} + b); under coulter they
// follow f_A(x) = A^{p^k} x^{p^{2k}} + A x and its root of f_A(x) = -B^{p^k}.
class GoldCaseSets {
public:
    GoldCaseSets(const GoldWeil& weil, SetReading reading, int workers = 0);

    const GoldWeil& weil() const { return *weil_; }
    SetReading reading() const { return reading_; }
    const PairClass& at(Fe alpha, Fe beta) const { return cls_[std::size_t{alpha.enc} * q_ + beta.enc]; }

    bool in_Y(Fe alpha, Fe beta) const {
        const auto k = at(alpha, beta).kind;
        return k == PairClass::nonperm_root || k == PairClass::nonperm_none;
    }
    bool in_A(Fe alpha, Fe beta) const { return at(alpha, beta).kind == PairClass::nonperm_root; }
    bool in_Ybar(Fe alpha, Fe beta) const { return at(alpha, beta).kind == PairClass::perm; }
    bool in_C(Fe A) const { return weil_->norm_special(A); }

    // Nonzero b with b^{p^{n-k}} = -b.
    const std::vector<Fe>& degenerate_betas() const { return deg_; }

private:
    const GoldWeil* weil_;
    SetReading reading_;
    std::uint32_t q_;
    std::vector<PairClass> cls_;
    std::vector<Fe> deg_;
};

bool is_unit_norm(const GoldWeil& weil, Fe c);

TbParts gold_Tb_c1(const GoldCaseSets& sets, Fe b, TheoremVariant variant = TheoremVariant::corrected);
TbParts gold_Tb_cm1(const GoldCaseSets& sets, Fe b, TheoremVariant variant = TheoremVariant::corrected);
TbParts gold_Tb_unit(const GoldCaseSets& sets, const CParam& cp, Fe b,
                     TheoremVariant variant = TheoremVariant::corrected);

struct AssembledValue {
    double raw = 0.0;
    double imag = 0.0;
    std::optional<std::uint64_t> entry;  // set when the value rounds cleanly
};

class EntryAssembler {
public:
    EntryAssembler(const PowerTable& pw, const CParam& cp, Assembly assembly = Assembly::pair_counts);

    AssembledValue evaluate(Fe b, Cx tb) const;
    // Throws RoundingToleranceExceeded when the value is not a clean integer.
    std::uint64_t assemble(Fe b, Cx tb) const;
    // The T_b that makes `entry` come out exactly.
    Cx implied_tb(Fe b, std::uint64_t entry) const;
    Assembly assembly() const { return assembly_; }

private:
    double q_;
    Assembly assembly_;
    std::vector<std::uint64_t> first_, second_;
};

// Generic engine: T_b from an S memo for any odd p and any exponent.
class GenericEngine {
public:
    GenericEngine(const PowerTable& pw, const Characters& chars, SumEngine engine, int workers = 0);

    const SMemo& memo() const { return memo_; }
    std::uint64_t entry(const CParam& cp, Fe b, Assembly assembly = Assembly::pair_counts) const;
    std::vector<std::uint64_t> row1(const CParam& cp, int workers = 0,
                                    Assembly assembly = Assembly::pair_counts) const;

private:
    const PowerTable* pw_;
    SMemo memo_;
};

// "c1", "cm1", "unit" or "general": the case engine that applies to c.
std::string_view case_engine_name(const GoldWeil& weil, const CParam& cp);
TbParts case_tb(const GoldCaseSets& sets, const FormMemo& forms, const CParam& cp, Fe b);

// Row a = 1 from the case engines: gold_Tb_c1 / gold_Tb_cm1 / gold_Tb_unit where
// they apply, gold_Tb_general otherwise.
std::vector<std::uint64_t> case_row1(const PowerTable& pw, const GoldCaseSets& sets, const FormMemo& forms,
                                     const CParam& cp, int workers = 0);

namespace serial {
SMemo s_memo(const Characters& chars, const MonomialSpec& spec, SumEngine engine);
std::vector<Cx> tb_product_all(const SMemo& memo, const CParam& cp);
}  // namespace serial

}  // namespace cbct
