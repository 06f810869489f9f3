#include <benchmark/benchmark.h>

#include <vector>

#include "isk/flow.hpp"

namespace {

using namespace isk;

struct Setup {
    classes::PnProblem pn{3, 2, 1.5, 2.0};
    classes::XmnProblem xmn{2, 3, 2, 0.5, 2.0};
    flow::Grid grid_pn, grid_xmn;
    std::unique_ptr<potential::Potential> u_pn, u_xmn;
    potential::FluxFunction flux = potential::FluxFunction::neg_identity();
    std::vector<double> w_pn, w_xmn, out;

    explicit Setup(int points) {
        flow::FlowProblem fp{pn, flux};
        flow::FlowProblem fx{xmn, flux};
        grid_pn = fp.default_grid(points);
        grid_xmn = fx.default_grid(points);
        u_pn = fp.make_potential();
        u_xmn = fx.make_potential();
        w_pn = flow::make_initial(fp, grid_pn, flow::InitialData::Chord);
        w_xmn = flow::make_initial(fx, grid_xmn, flow::InitialData::Chord);
        out.resize(points);
    }
};

void bench_pn(benchmark::State& state, flow::Exec exec) {
    Setup s(int(state.range(0)));
    for (auto _ : state) {
        flow::rhs_general_k(s.pn, *s.u_pn, s.flux, s.grid_pn, s.w_pn, s.out, exec);
        benchmark::DoNotOptimize(s.out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bench_xmn(benchmark::State& state, flow::Exec exec) {
    Setup s(int(state.range(0)));
    for (auto _ : state) {
        flow::rhs_xmn(s.xmn, *s.u_xmn, s.flux, s.grid_xmn, s.w_xmn, s.out, exec);
        benchmark::DoNotOptimize(s.out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_pn_serial(benchmark::State& s) { bench_pn(s, flow::Exec::Serial); }
void BM_pn_parallel(benchmark::State& s) { bench_pn(s, flow::Exec::Parallel); }
void BM_xmn_serial(benchmark::State& s) { bench_xmn(s, flow::Exec::Serial); }
void BM_xmn_parallel(benchmark::State& s) { bench_xmn(s, flow::Exec::Parallel); }

BENCHMARK(BM_pn_serial)->Arg(400)->Arg(4000)->Arg(40000);
BENCHMARK(BM_pn_parallel)->Arg(400)->Arg(4000)->Arg(40000);
BENCHMARK(BM_xmn_serial)->Arg(400)->Arg(4000)->Arg(40000);
BENCHMARK(BM_xmn_parallel)->Arg(400)->Arg(4000)->Arg(40000);

}  // namespace

BENCHMARK_MAIN();
