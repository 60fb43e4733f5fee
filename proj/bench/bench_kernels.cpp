// Serial reference kernels against the OpenMP ones.

#include <benchmark/benchmark.h>

#include "cbct/bct_char.hpp"

using namespace cbct;

namespace {

struct Setup {
    FieldCtx f;
    Characters ch;
    PowerTable pw;
    CParam cp;

    Setup(std::uint32_t p, unsigned n, std::uint64_t d)
        : f(FieldCtx::build(p, n)), ch(f), pw(f, MonomialSpec::make(f, d)), cp(CParam::make(f, Fe{2})) {}
};

Setup& field_3_6() {
    static Setup s(3, 6, 10);
    return s;
}

Setup& field_3_4() {
    static Setup s(3, 4, 10);
    return s;
}

void BM_BctRowSerial(benchmark::State& st) {
    auto& s = field_3_6();
    for (auto _ : st) benchmark::DoNotOptimize(serial::c_bct_row(s.pw, s.cp, FieldCtx::one()));
}

void BM_BctRowParallel(benchmark::State& st) {
    auto& s = field_3_6();
    for (auto _ : st) benchmark::DoNotOptimize(c_bct_row(s.pw, s.cp, FieldCtx::one(), int(st.range(0))));
}

void BM_DdtTableParallel(benchmark::State& st) {
    auto& s = field_3_4();
    for (auto _ : st) benchmark::DoNotOptimize(c_ddt_full(s.pw, s.cp, int(st.range(0))));
}

void BM_DdtTableSerial(benchmark::State& st) {
    auto& s = field_3_4();
    for (auto _ : st)
        for (std::uint32_t a = 0; a < s.f.q(); ++a) benchmark::DoNotOptimize(serial::c_ddt_row(s.pw, s.cp, Fe{a}));
}

void BM_SMemoSerial(benchmark::State& st) {
    auto& s = field_3_4();
    for (auto _ : st) benchmark::DoNotOptimize(serial::s_memo(s.ch, MonomialSpec::make(s.f, 10), SumEngine::direct));
}

void BM_SMemoParallel(benchmark::State& st) {
    auto& s = field_3_4();
    for (auto _ : st)
        benchmark::DoNotOptimize(SMemo::build(s.ch, MonomialSpec::make(s.f, 10), SumEngine::direct, int(st.range(0))));
}

void BM_TbSerial(benchmark::State& st) {
    auto& s = field_3_4();
    static const auto memo = SMemo::build(s.ch, MonomialSpec::make(s.f, 10), SumEngine::direct);
    for (auto _ : st) benchmark::DoNotOptimize(serial::tb_product_all(memo, s.cp));
}

void BM_TbParallel(benchmark::State& st) {
    auto& s = field_3_4();
    static const auto memo = SMemo::build(s.ch, MonomialSpec::make(s.f, 10), SumEngine::direct);
    for (auto _ : st) benchmark::DoNotOptimize(tb_product_all(memo, s.cp, int(st.range(0))));
}

}  // namespace

BENCHMARK(BM_BctRowSerial)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BctRowParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DdtTableSerial)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DdtTableParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SMemoSerial)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SMemoParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TbSerial)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TbParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
