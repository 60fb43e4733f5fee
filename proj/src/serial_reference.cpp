// Straight-line single-threaded versions of the parallel kernels. They use
// the plain textbook loops so tests can compare against them.

#include "cbct/bct_char.hpp"
#include "cbct/tables.hpp"

namespace cbct::serial {

std::vector<std::uint64_t> c_ddt_row(const PowerTable& pw, const CParam& cp, Fe a) {
    const auto& f = pw.field();
    std::vector<std::uint64_t> row(f.q(), 0);
    for (std::uint32_t x = 0; x < f.q(); ++x)
        ++row[f.sub(pw.at(f.add(Fe{x}, a)), f.mul(cp.c, pw.at(Fe{x}))).enc];
    return row;
}

std::vector<std::uint64_t> c_bct_row(const PowerTable& pw, const CParam& cp, Fe a) {
    const auto& f = pw.field();
    std::vector<std::uint64_t> row(f.q(), 0);
    for (std::uint32_t x = 0; x < f.q(); ++x) {
        for (std::uint32_t y = 0; y < f.q(); ++y) {
            const Fe b = f.sub(pw.at(Fe{y}), f.mul(cp.c, pw.at(Fe{x})));
            const Fe b2 = f.sub(pw.at(f.add(Fe{y}, a)), f.mul(cp.c_inv, pw.at(f.add(Fe{x}, a))));
            if (b == b2) ++row[b.enc];
        }
    }
    return row;
}

SMemo s_memo(const Characters& chars, const MonomialSpec& spec, SumEngine engine) {
    if (engine != SumEngine::direct) return SMemo::build(chars, spec, engine, 1);
    const auto& f = chars.field();
    if (!f.odd()) throw Error(ErrorCode::even_characteristic, "character engines need odd p");
    std::vector<Cx> values(std::size_t{f.q()} * f.q());
    for (std::uint32_t a = 0; a < f.q(); ++a)
        for (std::uint32_t b = 0; b < f.q(); ++b)
            values[std::size_t{a} * f.q() + b] = s_alpha_beta_direct(chars, spec.d_exp, Fe{a}, Fe{b});
    return SMemo(chars, engine, std::move(values));
}

std::vector<Cx> tb_product_all(const SMemo& memo, const CParam& cp) {
    const auto& chars = memo.characters();
    const auto& f = chars.field();
    std::vector<Cx> out(f.q());
    for (std::uint32_t b = 0; b < f.q(); ++b) {
        Cx t{0.0, 0.0};
        for (std::uint32_t a = 1; a < f.q(); ++a) {
            for (std::uint32_t bb = 1; bb < f.q(); ++bb) {
                const Fe alpha{a}, beta{bb};
                t += chars.chi1(f.neg(f.mul(Fe{b}, f.add(alpha, beta)))) * memo.at(alpha, beta) *
                     memo.at(f.neg(f.mul(alpha, cp.c)), f.neg(f.mul(beta, cp.c_inv)));
            }
        }
        out[b] = t;
    }
    return out;
}

}  // namespace cbct::serial
