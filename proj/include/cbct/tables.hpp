#pragma once

// Exact brute-force c-DDT and c-BCT of monomials x^d over F_q (any p).

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cbct/field.hpp"

namespace cbct {

struct MonomialSpec {
    std::uint64_t d_exp = 1;

    static MonomialSpec make(const FieldCtx& ctx, std::uint64_t d);
};

struct CParam {
    Fe c{1};
    Fe c_inv{1};

    static CParam make(const FieldCtx& ctx, Fe c);
};

// x -> x^d for every x, plus the preimage lists of each value.
class PowerTable {
public:
    PowerTable(const FieldCtx& ctx, const MonomialSpec& spec);

    const FieldCtx& field() const { return *ctx_; }
    std::uint64_t d() const { return d_; }
    Fe at(Fe x) const { return Fe{val_[x.enc]}; }
    const std::vector<std::uint32_t>& values() const { return val_; }
    // Elements y with y^d == v.
    std::span<const std::uint32_t> preimages(Fe v) const {
        return {pre_.data() + off_[v.enc], pre_.data() + off_[v.enc + 1]};
    }

private:
    const FieldCtx* ctx_;
    std::uint64_t d_;
    std::vector<std::uint32_t> val_;
    std::vector<std::uint32_t> off_;
    std::vector<std::uint32_t> pre_;
};

enum class TableKind { ddt, bct };
enum class EngineKind { brute, char_direct, char_gold, case_engine };

std::string_view to_string(TableKind k);
std::string_view to_string(EngineKind e);

struct Uniformity {
    std::uint64_t value = 0;
    std::vector<std::pair<Fe, Fe>> argmax;  // sorted by (a, b)
    std::string domain_note;
};

struct TableResult {
    TableKind kind = TableKind::ddt;
    CParam c;
    std::uint32_t q = 0;
    std::vector<std::uint64_t> entries;  // row-major, index a * q + b
    Uniformity uniformity;
    EngineKind engine = EngineKind::brute;

    std::uint64_t at(Fe a, Fe b) const { return entries[std::size_t{a.enc} * q + b.enc]; }
};

// 0 selects the OpenMP default.
int resolve_workers(int workers);

std::uint64_t c_ddt_entry(const PowerTable& pw, const CParam& cp, Fe a, Fe b);
std::vector<std::uint64_t> c_ddt_row(const PowerTable& pw, const CParam& cp, Fe a);
TableResult c_ddt_full(const PowerTable& pw, const CParam& cp, int workers = 0);
Uniformity c_ddt_uniformity(const TableResult& ddt);

std::uint64_t c_bct_entry(const PowerTable& pw, const CParam& cp, Fe a, Fe b);
// Both pair-form orientations: F(y) - cF(x) = b, F(y+a) - c^{-1}F(x+a) = b
// and the swapped x^d - c y^d system; equal as set cardinalities.
std::uint64_t c_bct_entry_swapped(const PowerTable& pw, const CParam& cp, Fe a, Fe b);
std::vector<std::uint64_t> c_bct_row(const PowerTable& pw, const CParam& cp, Fe a, int workers = 0);
std::vector<std::uint64_t> c_bct_row1(const PowerTable& pw, const CParam& cp, int workers = 0);
// Row a = 1 plus homogeneity, checked on `checks` random cells (seeded) first.
TableResult c_bct_full(const PowerTable& pw, const CParam& cp, int workers = 0, unsigned checks = 32,
                       std::uint64_t seed = 0x5eed);
// Assembles a full table from a row a = 1 produced by any engine; the a = 0
// row is always counted directly.
TableResult c_bct_from_row1(const PowerTable& pw, const CParam& cp, const std::vector<std::uint64_t>& row1,
                            EngineKind engine, int workers = 0);
Uniformity c_bct_uniformity(const TableResult& bct);

// M_c(b) = #{(x, y) : F(y) - c F(x) = b} for every b.
std::vector<std::uint64_t> value_difference_counts(const PowerTable& pw, Fe c);

namespace serial {
std::vector<std::uint64_t> c_ddt_row(const PowerTable& pw, const CParam& cp, Fe a);
std::vector<std::uint64_t> c_bct_row(const PowerTable& pw, const CParam& cp, Fe a);
}  // namespace serial

}  // namespace cbct
