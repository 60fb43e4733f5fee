#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>

#include "cbct/bct_char.hpp"

namespace cbct::cli {

namespace {

using ojson = nlohmann::ordered_json;

struct Job {
    std::uint32_t p = 0;
    unsigned n = 0;
    std::string modulus;
    std::optional<std::uint64_t> d;
    std::optional<unsigned> k;
    std::string c = "1";
    std::string b = "all";
    std::string engine;
    std::string format = "csv";
    std::string out;
    int workers = 0;
    bool max_q_override = false;
    std::optional<std::uint32_t> A, B, alpha, beta;
    std::string fault;
};

constexpr std::uint64_t kOverrideMaxQ = std::uint64_t{1} << 26;

FieldCtx make_field(const Job& job) {
    std::optional<std::vector<std::uint32_t>> mod;
    if (!job.modulus.empty()) {
        std::vector<std::uint32_t> coeffs;
        std::stringstream ss(job.modulus);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                coeffs.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
            } catch (const std::exception&) {
                throw Error(ErrorCode::invalid_input, "bad modulus coefficient '" + tok + "'");
            }
        }
        mod = std::move(coeffs);
    }
    return FieldCtx::build(job.p, job.n, mod, job.max_q_override ? kOverrideMaxQ : kDefaultMaxQ);
}

std::uint64_t resolve_d(const FieldCtx& f, const Job& job) {
    if (job.d.has_value() == job.k.has_value())
        throw Error(ErrorCode::invalid_input, "give exactly one of --d and --k");
    if (job.d) return MonomialSpec::make(f, *job.d).d_exp;
    if (*job.k < 1 || *job.k >= f.n()) throw Error(ErrorCode::invalid_input, "--k must satisfy 1 <= k < n");
    std::uint64_t pk = 1;
    for (unsigned i = 0; i < *job.k; ++i) pk *= f.p();
    return pk + 1;
}

Fe parse_element(const FieldCtx& f, const std::string& s, const char* what) {
    std::uint64_t v = 0;
    try {
        std::size_t used = 0;
        v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
        throw Error(ErrorCode::invalid_input, std::string(what) + ": '" + s + "' is not an element encoding");
    }
    if (v >= f.q()) throw Error(ErrorCode::invalid_input, std::string(what) + " out of range");
    return Fe{static_cast<std::uint32_t>(v)};
}

std::vector<Fe> select_c(const FieldCtx& f, const Job& job, std::uint64_t d) {
    std::vector<Fe> cs;
    if (job.c == "all") {
        for (std::uint32_t c = 1; c < f.q(); ++c) cs.push_back(Fe{c});
    } else if (job.c == "unit-norm") {
        const auto k = gold_k_for_exponent(f, d);
        if (!k) throw Error(ErrorCode::invalid_input, "unit-norm selector needs a Gold exponent");
        for (std::uint32_t c = 1; c < f.q(); ++c) {
            const Fe x{c};
            if (x != FieldCtx::one() && x != f.neg(FieldCtx::one()) && f.frobenius(x, *k) == x) cs.push_back(x);
        }
    } else {
        const Fe c = parse_element(f, job.c, "--c");
        if (c.is_zero()) throw Error(ErrorCode::invalid_input, "--c must be nonzero");
        cs.push_back(c);
    }
    return cs;
}

std::vector<Fe> select_b(const FieldCtx& f, const Job& job) {
    std::vector<Fe> bs;
    if (job.b == "all") {
        for (std::uint32_t b = 0; b < f.q(); ++b) bs.push_back(Fe{b});
    } else {
        bs.push_back(parse_element(f, job.b, "--b"));
    }
    return bs;
}

EngineKind parse_engine(const std::string& s) {
    if (s.empty() || s == "brute") return EngineKind::brute;
    if (s == "char-direct") return EngineKind::char_direct;
    if (s == "char-gold") return EngineKind::char_gold;
    if (s == "case") return EngineKind::case_engine;
    throw Error(ErrorCode::unsupported_engine, "unknown engine '" + s + "'");
}

void check_engine(const FieldCtx& f, EngineKind e, std::uint64_t d) {
    if (e == EngineKind::brute) return;
    if (!f.odd()) throw Error(ErrorCode::unsupported_engine, "character engines need odd p");
    if ((e == EngineKind::char_gold || e == EngineKind::case_engine) && !gold_k_for_exponent(f, d))
        throw Error(ErrorCode::unsupported_engine, "engine needs a Gold exponent p^k + 1");
}

// Lazily built per-field state shared by every c.
class Engines {
public:
    Engines(const FieldCtx& f, std::uint64_t d, int workers)
        : f_(f), chars_(f), pw_(f, MonomialSpec::make(f, d)), workers_(workers) {
        if (f.odd()) k_ = gold_k_for_exponent(f, d);
    }

    const PowerTable& pw() const { return pw_; }
    std::optional<unsigned> k() const { return k_; }

    std::vector<std::uint64_t> row1(EngineKind e, const CParam& cp) {
        switch (e) {
            case EngineKind::brute: return c_bct_row1(pw_, cp, workers_);
            case EngineKind::char_direct: return generic(SumEngine::direct).row1(cp, workers_);
            case EngineKind::char_gold: return generic(SumEngine::gold_closed).row1(cp, workers_);
            case EngineKind::case_engine: return case_row1(pw_, sets(), forms(), cp, workers_);
        }
        throw Error(ErrorCode::unsupported_engine, "unknown engine");
    }

    std::vector<Cx> tb_all(EngineKind e, const CParam& cp) {
        if (e == EngineKind::char_direct) return tb_product_all(generic(SumEngine::direct).memo(), cp, workers_);
        return tb_product_all(generic(SumEngine::gold_closed).memo(), cp, workers_);
    }

    const GenericEngine& generic(SumEngine s) {
        auto& slot = s == SumEngine::direct ? direct_ : gold_;
        if (!slot) slot.emplace(pw_, chars_, s, workers_);
        return *slot;
    }
    const GoldWeil& weil() {
        if (!weil_) weil_.emplace(chars_, *k_);
        return *weil_;
    }
    const GoldCaseSets& sets() {
        if (!sets_) sets_.emplace(weil(), SetReading::coulter, workers_);
        return *sets_;
    }
    const FormMemo& forms() {
        if (!forms_) forms_ = FormMemo::build(weil(), workers_);
        return *forms_;
    }

private:
    const FieldCtx& f_;
    Characters chars_;
    PowerTable pw_;
    int workers_;
    std::optional<unsigned> k_;
    std::optional<GenericEngine> direct_, gold_;
    std::optional<GoldWeil> weil_;
    std::optional<GoldCaseSets> sets_;
    std::optional<FormMemo> forms_;
};

ojson field_json(const FieldCtx& f) {
    return ojson{{"p", f.p()}, {"n", f.n()}, {"modulus", f.modulus()}};
}

void emit(const Job& job, std::ostream& out, const std::string& body) {
    if (job.out.empty()) {
        out << body;
        return;
    }
    std::ofstream file(job.out, std::ios::binary);
    if (!file) throw Error(ErrorCode::invalid_input, "cannot open " + job.out);
    file << body;
}

std::string table_body(const Job& job, const FieldCtx& f, std::uint64_t d, const TableResult& t) {
    std::ostringstream os;
    if (job.format == "json") {
        ojson j;
        j["schema"] = "cbct/1";
        j["kind"] = to_string(t.kind);
        j["p"] = f.p();
        j["n"] = f.n();
        j["modulus"] = f.modulus();
        j["d"] = d;
        j["c_enc"] = t.c.c.enc;
        auto rows = ojson::array();
        for (std::uint32_t a = 0; a < t.q; ++a) {
            auto row = ojson::array();
            for (std::uint32_t b = 0; b < t.q; ++b) row.push_back(t.at(Fe{a}, Fe{b}));
            rows.push_back(std::move(row));
        }
        j["entries"] = std::move(rows);
        j["uniformity"] = t.uniformity.value;
        auto am = ojson::array();
        for (const auto& [a, b] : t.uniformity.argmax) am.push_back({a.enc, b.enc});
        j["argmax"] = std::move(am);
        j["domain"] = t.uniformity.domain_note;
        j["engine"] = to_string(t.engine);
        os << j.dump() << '\n';
        return os.str();
    }
    os << "a\\b";
    for (std::uint32_t b = 0; b < t.q; ++b) os << ',' << b;
    os << '\n';
    for (std::uint32_t a = 0; a < t.q; ++a) {
        os << a;
        for (std::uint32_t b = 0; b < t.q; ++b) os << ',' << t.at(Fe{a}, Fe{b});
        os << '\n';
    }
    return os.str();
}

void summary(std::ostream& os, const TableResult& t) {
    os << to_string(t.kind) << " c=" << t.c.c.enc << " engine=" << to_string(t.engine)
       << " uniformity=" << t.uniformity.value << " domain=\"" << t.uniformity.domain_note
       << "\" argmax_count=" << t.uniformity.argmax.size() << " argmax=";
    const std::size_t shown = std::min<std::size_t>(t.uniformity.argmax.size(), 8);
    for (std::size_t i = 0; i < shown; ++i)
        os << (i ? " " : "") << '(' << t.uniformity.argmax[i].first.enc << ',' << t.uniformity.argmax[i].second.enc
           << ')';
    if (shown < t.uniformity.argmax.size()) os << " ...";
    os << '\n';
}

void check_format(const Job& job) {
    if (job.format != "csv" && job.format != "json")
        throw Error(ErrorCode::invalid_input, "--format must be csv or json");
}

// --- subcommands ------------------------------------------------------------

int cmd_field_info(const Job& job, std::ostream& out) {
    const auto f = make_field(job);
    bool ok = true;
    for (std::uint32_t x = 1; x < f.q(); ++x) ok &= f.exp(f.log(Fe{x})) == Fe{x};
    for (std::uint32_t x = 0; x < f.q() && x < 2048; ++x) {
        const Fe y{(x * 7919u + 13u) % f.q()};
        ok &= f.trace(f.add(Fe{x}, y)) == (f.trace(Fe{x}) + f.trace(y)) % f.p();
        ok &= f.frobenius(Fe{x}, f.n()) == Fe{x};
    }
    if (job.format == "json") {
        auto j = field_json(f);
        j = ojson{{"schema", "cbct/1"}, {"p", f.p()}, {"n", f.n()}, {"q", f.q()}, {"modulus", f.modulus()},
                  {"modulus_text", f.modulus_string()}, {"generator", f.generator().enc}, {"invariants_ok", ok}};
        out << j.dump() << '\n';
    } else {
        out << "p=" << f.p() << " n=" << f.n() << " q=" << f.q() << '\n'
            << "modulus=" << f.modulus_string() << '\n'
            << "generator=" << f.generator().enc << '\n'
            << "invariants=" << (ok ? "ok" : "FAILED") << '\n';
    }
    return ok ? 0 : 1;
}

int cmd_ddt(const Job& job, std::ostream& out, std::ostream& err) {
    check_format(job);
    const auto f = make_field(job);
    const auto d = resolve_d(f, job);
    if (parse_engine(job.engine) != EngineKind::brute)
        throw Error(ErrorCode::unsupported_engine, "the c-DDT is computed by the brute engine only");
    const PowerTable pw(f, MonomialSpec::make(f, d));
    const auto cs = select_c(f, job, d);
    if (cs.size() != 1) throw Error(ErrorCode::invalid_input, "ddt takes a single --c");
    const auto t = c_ddt_full(pw, CParam::make(f, cs[0]), job.workers);
    emit(job, out, table_body(job, f, d, t));
    summary(job.out.empty() ? err : out, t);
    return 0;
}

int cmd_bct(const Job& job, std::ostream& out, std::ostream& err) {
    check_format(job);
    const auto f = make_field(job);
    const auto d = resolve_d(f, job);
    const auto engine = parse_engine(job.engine);
    check_engine(f, engine, d);
    const auto cs = select_c(f, job, d);
    if (cs.size() != 1) throw Error(ErrorCode::invalid_input, "bct takes a single --c");
    const auto cp = CParam::make(f, cs[0]);
    Engines eng(f, d, job.workers);
    const auto t = engine == EngineKind::brute
                       ? c_bct_full(eng.pw(), cp, job.workers)
                       : c_bct_from_row1(eng.pw(), cp, eng.row1(engine, cp), engine, job.workers);
    emit(job, out, table_body(job, f, d, t));
    summary(job.out.empty() ? err : out, t);
    return 0;
}

int cmd_weil(const Job& job, std::ostream& out) {
    const auto f = make_field(job);
    const auto d = resolve_d(f, job);
    if (!f.odd()) throw Error(ErrorCode::even_characteristic, "Weil sums need odd p");
    const Characters chars(f);
    const auto k = gold_k_for_exponent(f, d);
    const std::string eng = job.engine.empty() ? (k ? "closed" : "direct") : job.engine;
    WeilValue v;
    std::string what;
    if (job.A) {
        if (job.alpha || job.beta) throw Error(ErrorCode::invalid_input, "give --A/--B or --alpha/--beta");
        if (!k) throw Error(ErrorCode::not_a_gold_exponent, "S_k(A,B) needs a Gold exponent");
        const GoldWeil w(chars, *k);
        const Fe A = parse_element(f, std::to_string(*job.A), "--A");
        const Fe B = parse_element(f, std::to_string(job.B.value_or(0)), "--B");
        what = "S_k(A,B)";
        if (eng == "closed") v = w.coulter_s(A, B);
        else if (eng == "direct") v = {s_k_direct(chars, w.params(), A, B), WeilBranch::direct};
        else throw Error(ErrorCode::unsupported_engine, "weil engine must be closed or direct for S_k");
    } else if (job.alpha && job.beta) {
        const Fe a = parse_element(f, std::to_string(*job.alpha), "--alpha");
        const Fe b = parse_element(f, std::to_string(*job.beta), "--beta");
        what = "S_alpha_beta";
        if (eng == "closed") {
            if (!k) throw Error(ErrorCode::not_a_gold_exponent, "closed forms need a Gold exponent");
            v = GoldWeil(chars, *k).gold_s_alpha_beta(a, b);
        } else if (eng == "direct") {
            v = {s_alpha_beta_direct(chars, d, a, b), WeilBranch::direct};
        } else if (eng == "gauss") {
            v = {s_alpha_beta_gauss(chars, GaussTable(chars), d, a, b), WeilBranch::direct};
        } else {
            throw Error(ErrorCode::unsupported_engine, "weil engine must be closed, direct or gauss");
        }
    } else {
        throw Error(ErrorCode::invalid_input, "give --A [--B] or --alpha and --beta");
    }
    if (job.format == "csv") {
        out << what << ',' << v.value.real() << ',' << v.value.imag() << ',' << to_string(v.branch) << '\n';
    } else {
        out << ojson{{"re", v.value.real()}, {"im", v.value.imag()}, {"branch", to_string(v.branch)}}.dump()
            << '\n';
    }
    return 0;
}

std::string fmt_value(const AssembledValue& v) {
    if (v.entry) return std::to_string(*v.entry);
    std::ostringstream os;
    os.precision(10);
    os << "~" << v.raw;
    return os.str();
}

int cmd_verify(const Job& job, std::ostream& out, std::ostream& err) {
    check_format(job);
    const auto f = make_field(job);
    const auto d = resolve_d(f, job);
    if (!f.odd()) throw Error(ErrorCode::even_characteristic, "verify needs odd p");
    std::optional<WeilBranch> fault;
    if (!job.fault.empty()) {
        for (int i = 0; i <= static_cast<int>(WeilBranch::gold_degenerate_zero); ++i)
            if (to_string(static_cast<WeilBranch>(i)) == job.fault) fault = static_cast<WeilBranch>(i);
        if (!fault) throw Error(ErrorCode::invalid_input, "unknown branch '" + job.fault + "'");
    }
    set_fault_injection(fault);
    struct Reset {
        ~Reset() { set_fault_injection(std::nullopt); }
    } reset;

    Engines eng(f, d, job.workers);
    const bool gold = eng.k().has_value();
    const auto cs = select_c(f, job, d);
    const auto bs = select_b(f, job);

    std::ostringstream rows;
    ojson jrows = ojson::array();
    if (job.format == "csv") rows << "c,b,brute,char_direct,char_gold,case,case_engine\n";
    std::uint64_t checked = 0, mismatches = 0;
    bool reported = false;
    for (const auto c : cs) {
        const auto cp = CParam::make(f, c);
        const EntryAssembler as(eng.pw(), cp);
        const auto brute = c_bct_row1(eng.pw(), cp, job.workers);
        const auto tdir = eng.tb_all(EngineKind::char_direct, cp);
        std::vector<Cx> tgold;
        if (gold) tgold = eng.tb_all(EngineKind::char_gold, cp);
        const std::string case_name = gold ? std::string(case_engine_name(eng.weil(), cp)) : "";
        for (const auto b : bs) {
            ++checked;
            const auto vd = as.evaluate(b, tdir[b.enc]);
            std::optional<AssembledValue> vg, vc;
            std::optional<TbParts> parts;
            if (gold) {
                vg = as.evaluate(b, tgold[b.enc]);
                parts = case_tb(eng.sets(), eng.forms(), cp, b);
                vc = as.evaluate(b, parts->T_b);
            }
            auto same = [&](const AssembledValue& v) { return v.entry && *v.entry == brute[b.enc]; };
            const bool ok = same(vd) && (!vg || same(*vg)) && (!vc || same(*vc));
            if (!ok) ++mismatches;
            const std::string sg = vg ? fmt_value(*vg) : "", sc = vc ? fmt_value(*vc) : "";
            if (job.format == "csv") {
                rows << c.enc << ',' << b.enc << ',' << brute[b.enc] << ',' << fmt_value(vd) << ',' << sg << ','
                     << sc << ',' << case_name << '\n';
            } else {
                jrows.push_back({{"c", c.enc}, {"b", b.enc}, {"brute", brute[b.enc]}, {"char_direct", fmt_value(vd)},
                                 {"char_gold", sg}, {"case", sc}, {"case_engine", case_name}});
            }
            if (!ok && !reported) {
                reported = true;
                out << "MISMATCH p=" << f.p() << " n=" << f.n() << " modulus=" << f.modulus_string()
                    << " k=" << (gold ? std::to_string(*eng.k()) : std::string("-")) << " d=" << d
                    << " c=" << c.enc << " b=" << b.enc << '\n'
                    << "  brute=" << brute[b.enc] << " char-direct=" << fmt_value(vd);
                if (gold) out << " char-gold=" << sg << " case(" << case_name << ")=" << sc;
                out << '\n';
                if (parts) {
                    out << "  case parts:";
                    for (const auto& pt : parts->parts)
                        out << ' ' << pt.label << '[' << pt.count << "]=" << pt.value.real();
                    out << '\n';
                    if (case_name != "general") {
                        const auto g = gold_Tb_general(eng.forms(), cp, b);
                        out << "  general strata:";
                        for (const auto& pt : g.parts)
                            out << ' ' << pt.label << '[' << pt.count << "]=" << pt.value.real();
                        out << '\n';
                    }
                }
            }
        }
    }
    if (job.format == "json") {
        ojson j{{"schema", "cbct/1"}, {"field", field_json(f)}, {"d", d}, {"rows", std::move(jrows)},
                {"checked", checked}, {"mismatches", mismatches}};
        rows << j.dump() << '\n';
    }
    if (!job.out.empty()) emit(job, out, rows.str());
    out << "verify checked=" << checked << " mismatches=" << mismatches << '\n';
    (void)err;
    return mismatches ? 1 : 0;
}

int cmd_sweep(const Job& job, std::ostream& out) {
    check_format(job);
    const auto f = make_field(job);
    const auto d = resolve_d(f, job);
    const auto engine = parse_engine(job.engine);
    check_engine(f, engine, d);
    Engines eng(f, d, job.workers);
    const auto cs = select_c(f, job, d);
    std::ostringstream os;
    ojson rows = ojson::array();
    if (job.format == "csv") os << "c,uniformity,argmax_count\n";
    for (const auto c : cs) {
        const auto row = eng.row1(engine, CParam::make(f, c));
        // Homogeneity maps row a = 1 onto every row a != 0 bijectively in b != 0.
        std::uint64_t best = 0, hits = 0;
        for (std::uint32_t b = 1; b < f.q(); ++b) {
            if (row[b] > best) best = row[b], hits = 0;
            if (row[b] == best) ++hits;
        }
        hits *= f.q() - 1;
        if (job.format == "csv") os << c.enc << ',' << best << ',' << hits << '\n';
        else rows.push_back({{"c", c.enc}, {"uniformity", best}, {"argmax_count", hits}});
    }
    if (job.format == "json") {
        os << ojson{{"schema", "cbct/1"}, {"field", field_json(f)}, {"d", d}, {"engine", to_string(engine)},
                    {"rows", std::move(rows)}}
                  .dump()
           << '\n';
    }
    emit(job, out, os.str());
    return 0;
}

void add_field_options(CLI::App* sub, Job& job) {
    sub->add_option("--p", job.p, "characteristic")->required();
    sub->add_option("--n", job.n, "extension degree")->required();
    sub->add_option("--modulus", job.modulus, "comma-separated coefficients, constant term first");
    sub->add_flag("--max-q-override", job.max_q_override, "allow q above 2^20");
    sub->add_option("--format", job.format, "csv or json");
    sub->add_option("--out", job.out, "output file");
}

void add_function_options(CLI::App* sub, Job& job) {
    sub->add_option("--d", job.d, "monomial exponent");
    sub->add_option("--k", job.k, "Gold parameter, d = p^k + 1");
    sub->add_option("--workers", job.workers, "worker threads (0 = all)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"c-DDT and c-BCT of monomials over finite fields", "cbct"};
    app.require_subcommand(1);
    Job job;

    auto* fi = app.add_subcommand("field-info", "describe a field and check its tables");
    add_field_options(fi, job);
    fi->get_option("--format")->default_str("text");
    job.format = "text";

    auto* ddt = app.add_subcommand("ddt", "c-differential distribution table");
    auto* bct = app.add_subcommand("bct", "c-boomerang connectivity table");
    auto* weil = app.add_subcommand("weil", "a single Weil sum with its branch tag");
    auto* verify = app.add_subcommand("verify", "cross-check every engine against brute force");
    auto* sweep = app.add_subcommand("sweep", "boomerang uniformity for each selected c");
    for (auto* sub : {ddt, bct, weil, verify, sweep}) {
        add_field_options(sub, job);
        add_function_options(sub, job);
    }
    for (auto* sub : {ddt, bct, verify, sweep}) sub->add_option("--c", job.c, "c encoding, all, or unit-norm");
    for (auto* sub : {bct, weil, sweep}) sub->add_option("--engine", job.engine, "engine");
    verify->add_option("--b", job.b, "b encoding or all");
    weil->add_option("--A", job.A);
    weil->add_option("--B", job.B);
    weil->add_option("--alpha", job.alpha);
    weil->add_option("--beta", job.beta);
    verify->add_option("--inject-fault", job.fault)->group("");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, ee;
        const int code = app.exit(e, o, ee);
        out << o.str();
        err << ee.str();
        return code == 0 ? 0 : 2;
    }
    if (!fi->parsed() && job.format == "text") job.format = weil->parsed() ? "json" : "csv";

    try {
        if (fi->parsed()) return cmd_field_info(job, out);
        if (ddt->parsed()) return cmd_ddt(job, out, err);
        if (bct->parsed()) return cmd_bct(job, out, err);
        if (weil->parsed()) return cmd_weil(job, out);
        if (verify->parsed()) return cmd_verify(job, out, err);
        if (sweep->parsed()) return cmd_sweep(job, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.is_internal() ? 1 : 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace cbct::cli
