#include "cbct/bct_char.hpp"

#include <cmath>
#include <cstdlib>

namespace cbct {

std::string_view to_string(SumEngine e) {
    switch (e) {
        case SumEngine::direct: return "direct";
        case SumEngine::gauss: return "gauss";
        case SumEngine::gold_closed: return "gold_closed";
    }
    return "unknown";
}

std::string_view to_string(Assembly a) { return a == Assembly::pair_counts ? "pair_counts" : "ddt_terms"; }

std::string_view to_string(TheoremVariant v) {
    switch (v) {
        case TheoremVariant::statement: return "statement";
        case TheoremVariant::proof: return "proof";
        case TheoremVariant::corrected: return "corrected";
    }
    return "unknown";
}

std::string_view to_string(SetReading r) { return r == SetReading::literal ? "literal" : "coulter"; }

Cx TbParts::sum_of_parts() const {
    Cx s{0.0, 0.0};
    for (const auto& p : parts) s += p.value;
    return s;
}

namespace {

void require_odd(const FieldCtx& f) {
    if (!f.odd()) throw Error(ErrorCode::even_characteristic, "character engines need odd p");
}

double neg1_pow(std::uint64_t k) { return k % 2 ? -1.0 : 1.0; }

// S_{a,b} = sum_t #{x : Tr(a F(x)) + Tr(b F(x+1)) = t} zeta^t, counted exactly.
std::vector<Cx> direct_memo(const Characters& chars, std::uint64_t d, int workers) {
    const auto& f = chars.field();
    const std::uint32_t q = f.q(), p = f.p();
    const auto de = static_cast<std::int64_t>(d);
    std::vector<Fe> u(q), v(q);
    for (std::uint32_t x = 0; x < q; ++x) {
        u[x] = f.pow(Fe{x}, de);
        v[x] = f.pow(f.add(Fe{x}, FieldCtx::one()), de);
    }
    // tr_v[b * q + x] = Tr(b v(x))
    std::vector<std::uint32_t> tr_v(std::size_t{q} * q);
    for (std::uint32_t b = 0; b < q; ++b)
        for (std::uint32_t x = 0; x < q; ++x) tr_v[std::size_t{b} * q + x] = f.trace(f.mul(Fe{b}, v[x]));
    std::vector<Cx> out(std::size_t{q} * q);
#pragma omp parallel num_threads(resolve_workers(workers))
    {
        std::vector<std::uint32_t> tr_u(q);
        std::vector<std::uint64_t> hist(p);
#pragma omp for schedule(static)
        for (std::int64_t a = 0; a < static_cast<std::int64_t>(q); ++a) {
            for (std::uint32_t x = 0; x < q; ++x) tr_u[x] = f.trace(f.mul(Fe{static_cast<std::uint32_t>(a)}, u[x]));
            for (std::uint32_t b = 0; b < q; ++b) {
                std::fill(hist.begin(), hist.end(), 0);
                const auto* tv = tr_v.data() + std::size_t{b} * q;
                for (std::uint32_t x = 0; x < q; ++x) ++hist[(tr_u[x] + tv[x]) % p];
                Cx s{0.0, 0.0};
                for (std::uint32_t t = 0; t < p; ++t) s += static_cast<double>(hist[t]) * chars.zeta(t);
                out[a * q + b] = s;
            }
        }
    }
    return out;
}

std::vector<Cx> gauss_memo(const Characters& chars, std::uint64_t d, int workers) {
    const auto& f = chars.field();
    const std::uint32_t q = f.q();
    const GaussTable gauss(chars);
    std::vector<Cx> out(std::size_t{q} * q);
#pragma omp parallel for schedule(dynamic) num_threads(resolve_workers(workers))
    for (std::int64_t a = 0; a < static_cast<std::int64_t>(q); ++a) {
        const Fe alpha{static_cast<std::uint32_t>(a)};
        for (std::uint32_t b = 0; b < q; ++b) {
            const Fe beta{b};
            out[a * q + b] = (alpha.is_zero() || beta.is_zero())
                                 ? s_alpha_beta_direct(chars, d, alpha, beta)
                                 : s_alpha_beta_gauss(chars, gauss, d, alpha, beta);
        }
    }
    return out;
}

unsigned gold_k_or_throw(const FieldCtx& f, std::uint64_t d) {
    const auto k = gold_k_for_exponent(f, d);
    if (!k) throw Error(ErrorCode::not_a_gold_exponent, "d = " + std::to_string(d) + " is not p^k + 1");
    return *k;
}

// W[A] = sum_{a + b = A, ab != 0} S_{a,b} S_{-ac,-bc^-1}, each A summed in a order.
std::vector<Cx> product_by_A(const SMemo& memo, const CParam& cp, int workers) {
    const auto& f = memo.characters().field();
    const std::uint32_t q = f.q();
    std::vector<Cx> W(q);
#pragma omp parallel for schedule(static) num_threads(resolve_workers(workers))
    for (std::int64_t A = 0; A < static_cast<std::int64_t>(q); ++A) {
        Cx acc{0.0, 0.0};
        for (std::uint32_t a = 1; a < q; ++a) {
            const Fe alpha{a};
            const Fe beta = f.sub(Fe{static_cast<std::uint32_t>(A)}, alpha);
            if (beta.is_zero()) continue;
            acc += memo.at(alpha, beta) *
                   memo.at(f.neg(f.mul(alpha, cp.c)), f.neg(f.mul(beta, cp.c_inv)));
        }
        W[A] = acc;
    }
    return W;
}

Cx contract(const Characters& chars, const std::vector<Cx>& W, Fe b) {
    const auto& f = chars.field();
    Cx t{0.0, 0.0};
    for (std::uint32_t A = 0; A < f.q(); ++A) t += chars.chi1(f.neg(f.mul(b, Fe{A}))) * W[A];
    return t;
}

struct CaseCtx {
    const GoldCaseSets& sets;
    const GoldWeil& w;
    const FieldCtx& f;
    const Characters& ch;
    const GoldParams& gp;
    std::uint32_t p, n, q, e;

    explicit CaseCtx(const GoldCaseSets& s)
        : sets(s), w(s.weil()), f(w.field()), ch(w.characters()), gp(w.params()), p(f.p()), n(f.n()), q(f.q()),
          e(gp.e) {}

    double P(unsigned ex) const { return sqrt_p_power(p, 2 * ex); }
    Cx chi(Fe x) const { return ch.chi1(x); }

    // sum over A != 0 with A^{(q-1)/(p^e+1)} = (-1)^t of chi_1(-bA)
    Cx sigma1(Fe b) const {
        Cx s{0.0, 0.0};
        for (std::uint32_t A = 1; A < q; ++A)
            if (sets.in_C(Fe{A})) s += chi(f.neg(f.mul(b, Fe{A})));
        return s;
    }
    // sum over A != 0 of chi_1(-bA)
    double all_nonzero(Fe b) const { return (b.is_zero() ? q : 0.0) - 1.0; }
};

}  // namespace

// ---------------------------------------------------------------------------

SMemo SMemo::build(const Characters& chars, const MonomialSpec& spec, SumEngine engine, int workers) {
    const auto& f = chars.field();
    require_odd(f);
    switch (engine) {
        case SumEngine::direct: return SMemo(chars, engine, direct_memo(chars, spec.d_exp, workers));
        case SumEngine::gauss: return SMemo(chars, engine, gauss_memo(chars, spec.d_exp, workers));
        case SumEngine::gold_closed: {
            const GoldWeil weil(chars, gold_k_or_throw(f, spec.d_exp));
            const auto forms = FormMemo::build(weil, workers);
            std::vector<Cx> values(std::size_t{f.q()} * f.q());
            for (std::uint32_t a = 0; a < f.q(); ++a)
                for (std::uint32_t b = 0; b < f.q(); ++b)
                    values[std::size_t{a} * f.q() + b] = forms.at(Fe{a}, Fe{b}).value(chars);
            return SMemo(chars, engine, std::move(values));
        }
    }
    throw Error(ErrorCode::unsupported_engine, "unknown sum engine");
}

FormMemo FormMemo::build(const GoldWeil& weil, int workers) {
    const auto& f = weil.field();
    const std::uint32_t q = f.q();
    const unsigned back = f.n() - weil.params().k;
    FormMemo m;
    m.weil_ = &weil;
    m.q_ = q;
    m.forms_.resize(std::size_t{q} * q);
#pragma omp parallel for schedule(dynamic) num_threads(resolve_workers(workers))
    for (std::int64_t Ai = 0; Ai < static_cast<std::int64_t>(q); ++Ai) {
        const Fe A{static_cast<std::uint32_t>(Ai)};
        if (A.is_zero()) {
            for (std::uint32_t b = 0; b < q; ++b)
                m.forms_[std::size_t{f.neg(Fe{b}).enc} * q + b] = weil.gold_form(f.neg(Fe{b}), Fe{b});
            continue;
        }
        const LinMap fmap = weil.coulter_map(A);
        for (std::uint32_t b = 0; b < q; ++b) {
            const Fe beta{b};
            const Fe alpha = f.sub(A, beta);
            const Fe B = f.add(f.frobenius(beta, back), beta);
            ClosedForm cf = weil.coulter_s_form(A, B, fmap);
            cf.phase = f.add(cf.phase, beta);
            m.forms_[std::size_t{alpha.enc} * q + b] = cf;
        }
    }
    return m;
}

std::vector<Cx> tb_product_all(const SMemo& memo, const CParam& cp, int workers) {
    const auto& chars = memo.characters();
    const std::uint32_t q = chars.field().q();
    const auto W = product_by_A(memo, cp, workers);
    std::vector<Cx> out(q);
#pragma omp parallel for schedule(static) num_threads(resolve_workers(workers))
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(q); ++b)
        out[b] = contract(chars, W, Fe{static_cast<std::uint32_t>(b)});
    return out;
}

Cx tb_product(const SMemo& memo, const CParam& cp, Fe b) {
    return contract(memo.characters(), product_by_A(memo, cp, 1), b);
}

TbParts gold_Tb_general(const FormMemo& forms, const CParam& cp, Fe b) {
    const auto& w = forms.weil();
    const auto& f = w.field();
    const auto& ch = w.characters();
    const std::uint32_t q = f.q(), p = f.p();
    const unsigned max_hp = 4 * f.n() + 1;
    constexpr unsigned kBranches = 10;

    // exact[((hp * 4) + quarter) * p + trace]
    std::vector<std::int64_t> exact(std::size_t{max_hp} * 4 * p, 0);
    std::vector<Cx> region_value(kBranches * kBranches);
    std::vector<std::uint64_t> region_count(kBranches * kBranches, 0);

    for (std::uint32_t a = 1; a < q; ++a) {
        for (std::uint32_t bb = 1; bb < q; ++bb) {
            const Fe alpha{a}, beta{bb};
            const auto& f1 = forms.at(alpha, beta);
            const auto& f2 = forms.at(f.neg(f.mul(alpha, cp.c)), f.neg(f.mul(beta, cp.c_inv)));
            const auto r = static_cast<unsigned>(f1.branch) * kBranches + static_cast<unsigned>(f2.branch);
            ++region_count[r];
            const int sign = f1.sign * f2.sign;
            if (sign == 0) continue;
            const unsigned hp = f1.half_pow + f2.half_pow;
            const int quarter = ((f1.quarter + f2.quarter) % 4 + 4) % 4;
            const Fe phase = f.sub(f.add(f1.phase, f2.phase), f.mul(b, f.add(alpha, beta)));
            const std::uint32_t t = f.trace(phase);
            exact[(std::size_t{hp} * 4 + quarter) * p + t] += sign;
            region_value[r] += static_cast<double>(sign) * sqrt_p_power(p, hp) * i_pow(quarter) * ch.zeta(t);
        }
    }

    TbParts out;
    out.variant = TheoremVariant::corrected;
    out.reading = SetReading::coulter;
    Cx total{0.0, 0.0};
    for (unsigned hp = 0; hp < max_hp; ++hp) {
        for (int qr = 0; qr < 4; ++qr) {
            for (std::uint32_t t = 0; t < p; ++t) {
                const auto cnt = exact[(std::size_t{hp} * 4 + qr) * p + t];
                if (cnt) total += static_cast<double>(cnt) * sqrt_p_power(p, hp) * i_pow(qr) * ch.zeta(t);
            }
        }
    }
    out.T_b = total;
    for (unsigned r = 0; r < kBranches * kBranches; ++r) {
        if (!region_count[r]) continue;
        std::string label(to_string(static_cast<WeilBranch>(r / kBranches)));
        label += "*";
        label += to_string(static_cast<WeilBranch>(r % kBranches));
        out.parts.push_back({std::move(label), region_value[r], region_count[r]});
    }
    return out;
}

// ---------------------------------------------------------------------------

GoldCaseSets::GoldCaseSets(const GoldWeil& weil, SetReading reading, int workers)
    : weil_(&weil), reading_(reading), q_(weil.field().q()), cls_(std::size_t{q_} * q_) {
    const auto& f = weil.field();
    const unsigned k = weil.params().k, back = f.n() - k;
    for (std::uint32_t b = 1; b < q_; ++b)
        if (f.frobenius(Fe{b}, back) == f.neg(Fe{b})) deg_.push_back(Fe{b});

    auto classify = [&](const LinMap& map, Fe rhs) {
        PairClass pc;
        const auto root = map.solve(f, rhs);
        if (map.is_permutation()) pc.kind = PairClass::perm;
        else pc.kind = root ? PairClass::nonperm_root : PairClass::nonperm_none;
        if (root) pc.root = *root;
        return pc;
    };

#pragma omp parallel for schedule(dynamic) num_threads(resolve_workers(workers))
    for (std::int64_t Ai = 0; Ai < static_cast<std::int64_t>(q_); ++Ai) {
        const Fe A{static_cast<std::uint32_t>(Ai)};
        std::optional<LinMap> fmap;
        if (!A.is_zero() && reading == SetReading::coulter) fmap = weil.coulter_map(A);
        for (std::uint32_t bi = 0; bi < q_; ++bi) {
            const Fe beta{bi};
            const Fe alpha = f.sub(A, beta);
            const Fe B = f.add(f.frobenius(beta, back), beta);
            PairClass pc;
            if (A.is_zero()) pc.kind = PairClass::a_zero;
            else if (B.is_zero()) pc.kind = PairClass::b_zero;
            else if (reading == SetReading::coulter) pc = classify(*fmap, f.neg(f.frobenius(B, k)));
            else pc = classify(weil.lab_map(alpha, beta), f.neg(f.add(f.frobenius(beta, k), beta)));
            cls_[std::size_t{alpha.enc} * q_ + bi] = pc;
        }
    }
}

bool is_unit_norm(const GoldWeil& weil, Fe c) {
    const auto& f = weil.field();
    if (c.is_zero() || c == FieldCtx::one() || c == f.neg(FieldCtx::one())) return false;
    return f.frobenius(c, weil.params().k) == c;
}

TbParts gold_Tb_c1(const GoldCaseSets& sets, Fe b, TheoremVariant variant) {
    const CaseCtx x(sets);
    const auto& f = x.f;
    Cx sY{0.0, 0.0}, sA{0.0, 0.0};
    std::uint64_t nY = 0, nA = 0;
    for (std::uint32_t a = 1; a < x.q; ++a) {
        for (std::uint32_t bb = 1; bb < x.q; ++bb) {
            const auto& pc = sets.at(Fe{a}, Fe{bb});
            if (pc.kind != PairClass::perm && pc.kind != PairClass::nonperm_root) continue;
            const Cx v = x.chi(f.neg(f.mul(b, f.add(Fe{a}, Fe{bb}))));
            if (pc.kind == PairClass::perm) sY += v, ++nY;
            else sA += v, ++nA;
        }
    }
    TbParts out;
    out.variant = variant;
    out.reading = sets.reading();
    if (!x.gp.ne_even) {
        const double sign = variant == TheoremVariant::corrected
                                ? 1.0
                                : neg1_pow(std::uint64_t{x.n} * (x.p + 1) / 2);
        out.parts.push_back({"Ybar1", sign * x.P(x.n) * sY, nY});
        out.aux.push_back({"sum_Ybar1", sY, nY});
        out.T_b = out.sum_of_parts();
        return out;
    }
    const unsigned n = x.n, e = x.e;
    const Cx s1 = x.sigma1(b);
    out.aux.push_back({"Sigma1", s1, 0});
    out.aux.push_back({"sum_A1", sA, nA});
    out.aux.push_back({"sum_Ybar1", sY, nY});
    const Cx t4 = x.P(n + 2 * e) * sA + x.P(n) * sY;
    switch (variant) {
        case TheoremVariant::statement:
            out.parts.push_back({"constant", {x.P(2 * n + e) - 2 * x.P(2 * n) + x.P(n), 0.0}, 0});
            out.parts.push_back(
                {"Sigma1_term", (x.P(2 * n + 2 * e) - x.P(n + 2 * e) - x.P(2 * n) + x.P(n)) * s1, 0});
            break;
        case TheoremVariant::proof:
            out.parts.push_back({"T_b1", {x.P(2 * n) * (x.P(e) - 1), 0.0}, 0});
            out.parts.push_back({"T_b2", x.P(n + 2 * e) * (x.P(n) - 1) * s1, 0});
            out.parts.push_back({"T_b3", -x.P(n) * (x.P(n) - 1) * (1.0 + s1), 0});
            break;
        case TheoremVariant::corrected: {
            const auto& D = sets.degenerate_betas();
            const double nd = static_cast<double>(D.size());
            Cx sd{0.0, 0.0};
            for (const auto beta : D) sd += x.chi(f.neg(f.mul(b, beta)));
            out.parts.push_back({"T_b1", {x.P(2 * n) * nd, 0.0}, D.size()});
            out.parts.push_back({"T_b2", x.P(n + 2 * e) * (nd * s1 - sd), 0});
            out.parts.push_back({"T_b3", x.P(n) * nd * (x.all_nonzero(b) - s1), 0});
            break;
        }
    }
    out.parts.push_back({"T_b4", t4, nA + nY});
    out.T_b = out.sum_of_parts();
    return out;
}

TbParts gold_Tb_cm1(const GoldCaseSets& sets, Fe b, TheoremVariant variant) {
    const CaseCtx x(sets);
    const auto& f = x.f;
    const Fe two = f.from_int(2);
    Cx sY{0.0, 0.0}, sA{0.0, 0.0};
    std::uint64_t nY = 0, nA = 0;
    for (std::uint32_t a = 1; a < x.q; ++a) {
        for (std::uint32_t bb = 1; bb < x.q; ++bb) {
            const Fe alpha{a}, beta{bb};
            const auto& pc = sets.at(alpha, beta);
            if (pc.kind != PairClass::perm && pc.kind != PairClass::nonperm_root) continue;
            const Fe A = f.add(alpha, beta);
            // 2b - A(b_row + 2 x^{p^k+1})
            const Fe arg = f.sub(f.sub(f.mul(two, beta), f.mul(b, A)), f.mul(two, x.w.quad(A, pc.root)));
            if (pc.kind == PairClass::perm) sY += x.chi(arg), ++nY;
            else sA += x.chi(arg), ++nA;
        }
    }
    TbParts out;
    out.variant = variant;
    out.reading = sets.reading();
    if (!x.gp.ne_even) {
        const double sign = neg1_pow(std::uint64_t{x.n} * (x.p - 1) / 2);
        out.parts.push_back({"Ybar1", sign * x.P(x.n) * sY, nY});
        out.aux.push_back({"sum_Ybar1", sY, nY});
        out.T_b = out.sum_of_parts();
        return out;
    }
    const unsigned n = x.n, e = x.e;
    const auto& D = sets.degenerate_betas();
    const Cx s1 = x.sigma1(b);
    Cx s2{0.0, 0.0};
    for (const auto beta : D) s2 += x.chi(f.mul(two, beta));
    out.aux.push_back({"Sigma1", s1, 0});
    out.aux.push_back({"Sigma2", s2, D.size()});
    out.aux.push_back({"sum_A1", sA, nA});
    out.aux.push_back({"sum_Ybar1", sY, nY});
    const Cx t4 = x.P(n + 2 * e) * sA + x.P(n) * sY;
    switch (variant) {
        case TheoremVariant::statement:
            out.parts.push_back({"first", x.P(n) * (x.P(n) - 1) * s1, 0});
            out.parts.push_back({"Sigma1_Sigma2", x.P(n) * (x.P(2 * e) - 1) * s1 * s2, 0});
            break;
        case TheoremVariant::proof:
            out.parts.push_back({"first", x.P(n) * (x.P(n) - 1) * s2, 0});
            out.parts.push_back({"Sigma1_Sigma2", x.P(n) * (x.P(2 * e) - 1) * s1 * s2, 0});
            break;
        case TheoremVariant::corrected: {
            Cx sd{0.0, 0.0};
            for (const auto beta : D) sd += x.chi(f.mul(f.sub(two, b), beta));
            out.parts.push_back({"T_b1", x.P(2 * n) * s2, D.size()});
            out.parts.push_back({"T_b2", x.P(n + 2 * e) * (s1 * s2 - sd), 0});
            out.parts.push_back({"T_b3", x.P(n) * s2 * (x.all_nonzero(b) - s1), 0});
            break;
        }
    }
    out.parts.push_back({"T_b4", t4, nA + nY});
    out.T_b = out.sum_of_parts();
    return out;
}

TbParts gold_Tb_unit(const GoldCaseSets& sets, const CParam& cp, Fe b, TheoremVariant variant) {
    const CaseCtx x(sets);
    const auto& f = x.f;
    if (!is_unit_norm(x.w, cp.c))
        throw Error(ErrorCode::precondition_violated, "c must satisfy c^{p^k-1} = 1 and c != +-1");
    const Fe omc = f.sub(FieldCtx::one(), cp.c_inv);  // 1 - c^{-1}
    const bool corrected = variant == TheoremVariant::corrected;
    TbParts out;
    out.variant = variant;
    out.reading = sets.reading();

    auto partner = [&](Fe alpha, Fe beta) {
        return std::pair{f.neg(f.mul(alpha, cp.c)), f.neg(f.mul(beta, cp.c_inv))};
    };
    auto usable = [](const PairClass& pc) {
        return pc.kind == PairClass::perm || pc.kind == PairClass::nonperm_root;
    };

    if (!x.gp.ne_even) {
        Cx s{0.0, 0.0};
        std::uint64_t cnt = 0;
        for (std::uint32_t a = 1; a < x.q; ++a) {
            for (std::uint32_t bb = 1; bb < x.q; ++bb) {
                const Fe alpha{a}, beta{bb};
                const auto [a2, b2] = partner(alpha, beta);
                const auto& p1 = sets.at(alpha, beta);
                const auto& p2 = sets.at(a2, b2);
                if (p1.kind != PairClass::perm || p2.kind != PairClass::perm) continue;
                const Fe A = f.add(alpha, beta), A2 = f.add(a2, b2);
                Fe arg = f.add(f.neg(f.mul(b, A)), f.mul(beta, omc));
                arg = f.sub(arg, f.add(x.w.quad(A, p1.root), x.w.quad(A2, p2.root)));
                s += static_cast<double>(x.ch.eta(f.mul(A, A2))) * x.chi(arg);
                ++cnt;
            }
        }
        out.parts.push_back({"Ybar1_Ybar2", x.P(x.n) * neg1_pow(std::uint64_t{x.n} * (x.p - 1) / 2) * s, cnt});
        out.T_b = out.sum_of_parts();
        return out;
    }

    const unsigned n = x.n, e = x.e, m = *x.gp.m, t = *x.gp.t;
    const double sgn = neg1_pow(t + 1);
    const auto& D = sets.degenerate_betas();
    const Fe c_inv2 = f.mul(cp.c_inv, cp.c_inv);

    Cx s3{0.0, 0.0};
    for (const auto beta : D) s3 += x.chi(f.mul(beta, omc));
    out.aux.push_back({"Sigma3", s3, D.size()});
    out.parts.push_back({"T_b1", x.P(n + m + e) * sgn * s3, D.size()});

    Cx cc{0.0, 0.0}, cx{0.0, 0.0}, nn{0.0, 0.0}, special{0.0, 0.0};
    for (const auto beta : D) {
        for (std::uint32_t a = 1; a < x.q; ++a) {
            const Fe alpha{a};
            const Fe A = f.add(alpha, beta);
            const Fe A2 = f.neg(f.add(f.mul(cp.c, alpha), f.mul(cp.c_inv, beta)));
            if (A.is_zero() || A2.is_zero()) continue;
            const bool s1 = sets.in_C(A), s2 = sets.in_C(A2);
            const Cx v = x.chi(f.add(f.neg(f.mul(b, A)), f.mul(beta, omc)));
            if (s1 && s2) cc += v;
            else if (s1 != s2) cx += v;
            else nn += v;
        }
        // a = -b c^{-2}
        const Fe one_minus = f.sub(FieldCtx::one(), f.mul(b, f.add(FieldCtx::one(), cp.c_inv)));
        special += x.chi(f.mul(f.mul(beta, omc), one_minus));
    }
    out.parts.push_back({"C_and_C'", x.P(n + 2 * e) * cc, 0});
    out.parts.push_back({"C_xor_C'", -x.P(n + e) * cx, 0});
    out.parts.push_back({"neither_C", x.P(n) * nn, 0});
    out.parts.push_back({"alpha=-beta*c^-2", x.P(n + m + e) * sgn * special, D.size()});

    Cx both{0.0, 0.0}, one{0.0, 0.0}, none{0.0, 0.0};
    std::uint64_t n_both = 0, n_one = 0, n_none = 0;
    for (std::uint32_t a = 1; a < x.q; ++a) {
        for (std::uint32_t bb = 1; bb < x.q; ++bb) {
            const Fe alpha{a}, beta{bb};
            const auto [a2, b2] = partner(alpha, beta);
            const auto& p1 = sets.at(alpha, beta);
            const auto& p2 = sets.at(a2, b2);
            if (!usable(p1) || !usable(p2)) continue;
            if (!corrected && alpha == f.mul(beta, c_inv2)) continue;
            const Fe A = f.add(alpha, beta), A2 = f.add(a2, b2);
            Fe arg = f.sub(f.mul(beta, omc), f.add(x.w.quad(A, p1.root), x.w.quad(A2, p2.root)));
            if (corrected) arg = f.sub(arg, f.mul(b, A));
            const bool np1 = p1.kind == PairClass::nonperm_root, np2 = p2.kind == PairClass::nonperm_root;
            if (np1 && np2) both += x.chi(arg), ++n_both;
            else if (np1 != np2) one += x.chi(arg), ++n_one;
            else none += x.chi(arg), ++n_none;
        }
    }
    out.parts.push_back({"A1'_and_A2'", x.P(n + 2 * e) * both, n_both});
    out.parts.push_back({"one_of_A1'_A2'", -x.P(n + e) * one, n_one});
    out.parts.push_back({"Y1~_and_Y2~", x.P(n) * none, n_none});
    out.T_b = out.sum_of_parts();
    return out;
}

// ---------------------------------------------------------------------------

EntryAssembler::EntryAssembler(const PowerTable& pw, const CParam& cp, Assembly assembly)
    : q_(static_cast<double>(pw.field().q())), assembly_(assembly) {
    if (assembly == Assembly::pair_counts) {
        first_ = value_difference_counts(pw, cp.c);
        second_ = value_difference_counts(pw, cp.c_inv);
    } else {
        first_ = c_ddt_row(pw, cp, FieldCtx::one());
        second_ = c_ddt_row(pw, CParam{cp.c_inv, cp.c}, FieldCtx::one());
    }
}

AssembledValue EntryAssembler::evaluate(Fe b, Cx tb) const {
    const double shift = assembly_ == Assembly::pair_counts ? -1.0 : 1.0;
    AssembledValue v;
    v.raw = static_cast<double>(first_[b.enc] + second_[b.enc]) / q_ + shift + tb.real() / (q_ * q_);
    v.imag = tb.imag();
    const double r = std::round(v.raw);
    if (std::abs(v.imag) < 1e-6 * q_ * q_ && std::abs(v.raw - r) < 1e-4 && r >= 0.0)
        v.entry = static_cast<std::uint64_t>(r);
    return v;
}

std::uint64_t EntryAssembler::assemble(Fe b, Cx tb) const {
    const auto v = evaluate(b, tb);
    if (!v.entry)
        throw Error(ErrorCode::rounding_tolerance_exceeded,
                    "b = " + std::to_string(b.enc) + ": raw " + std::to_string(v.raw) + ", imag " +
                        std::to_string(v.imag));
    return *v.entry;
}

Cx EntryAssembler::implied_tb(Fe b, std::uint64_t entry) const {
    const double shift = assembly_ == Assembly::pair_counts ? -1.0 : 1.0;
    const double base = static_cast<double>(first_[b.enc] + second_[b.enc]) / q_ + shift;
    return {(static_cast<double>(entry) - base) * q_ * q_, 0.0};
}

GenericEngine::GenericEngine(const PowerTable& pw, const Characters& chars, SumEngine engine, int workers)
    : pw_(&pw), memo_(SMemo::build(chars, MonomialSpec{pw.d()}, engine, workers)) {}

std::uint64_t GenericEngine::entry(const CParam& cp, Fe b, Assembly assembly) const {
    return EntryAssembler(*pw_, cp, assembly).assemble(b, tb_product(memo_, cp, b));
}

std::vector<std::uint64_t> GenericEngine::row1(const CParam& cp, int workers, Assembly assembly) const {
    const auto tbs = tb_product_all(memo_, cp, workers);
    const EntryAssembler as(*pw_, cp, assembly);
    std::vector<std::uint64_t> row(tbs.size());
    for (std::uint32_t b = 0; b < tbs.size(); ++b) row[b] = as.assemble(Fe{b}, tbs[b]);
    return row;
}

std::string_view case_engine_name(const GoldWeil& weil, const CParam& cp) {
    const auto& f = weil.field();
    if (cp.c == FieldCtx::one()) return "c1";
    if (cp.c == f.neg(FieldCtx::one())) return "cm1";
    if (is_unit_norm(weil, cp.c)) return "unit";
    return "general";
}

TbParts case_tb(const GoldCaseSets& sets, const FormMemo& forms, const CParam& cp, Fe b) {
    const auto name = case_engine_name(sets.weil(), cp);
    if (name == "c1") return gold_Tb_c1(sets, b);
    if (name == "cm1") return gold_Tb_cm1(sets, b);
    if (name == "unit") return gold_Tb_unit(sets, cp, b);
    return gold_Tb_general(forms, cp, b);
}

std::vector<std::uint64_t> case_row1(const PowerTable& pw, const GoldCaseSets& sets, const FormMemo& forms,
                                     const CParam& cp, int workers) {
    const std::uint32_t q = pw.field().q();
    const EntryAssembler as(pw, cp, Assembly::pair_counts);
    std::vector<Cx> tbs(q);
#pragma omp parallel for schedule(dynamic) num_threads(resolve_workers(workers))
    for (std::int64_t bi = 0; bi < static_cast<std::int64_t>(q); ++bi)
        tbs[bi] = case_tb(sets, forms, cp, Fe{static_cast<std::uint32_t>(bi)}).T_b;
    std::vector<std::uint64_t> row(q);
    for (std::uint32_t b = 0; b < q; ++b) row[b] = as.assemble(Fe{b}, tbs[b]);
    return row;
}

}  // namespace cbct
