// Micro benchmarks for the numeric kernels: GF(2) elimination, expression
// field evaluation, one integrator window transport, and a full locus scan
// miss evaluation.

#include <memory>

#include "benchmark/benchmark.h"

#include "morsetower/flow.hpp"
#include "morsetower/gf2.hpp"
#include "morsetower/scenario.hpp"

namespace {

using namespace morse;

Gf2Matrix random_bits(std::uint64_t seed, std::size_t r, std::size_t c) {
    Gf2Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
            m.set(i, j, static_cast<int>(seed >> 63));
        }
    return m;
}

void BM_Gf2Rref(benchmark::State& state) {
    const Gf2Matrix m = random_bits(42, static_cast<std::size_t>(state.range(0)),
                                    static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(gf2_rref(m).rank());
}
BENCHMARK(BM_Gf2Rref)->Arg(8)->Arg(32)->Arg(64);

struct ScenarioFixture {
    Scenario sc;
    std::shared_ptr<const MorseSmalePair> pair;
    ParamHomotopy family;
    ScenarioFixture()
        : sc(Scenario::load_file(std::string(MORSETOWER_SCENARIO_DIR) + "/family_designed.json")) {
        auto alpha = sc.make_alpha();
        pair = alpha;
        family = sc.make_family(alpha, alpha);
    }
};

ScenarioFixture& fixture() {
    static ScenarioFixture f;
    return f;
}

void BM_FieldEval(benchmark::State& state) {
    auto& f = fixture();
    const ChartPoint p{0, {0.4, -0.2}};
    const std::array<double, 1> s{0.37};
    double t = -0.5;
    for (auto _ : state) {
        t = t < 0.9 ? t + 1e-6 : -0.9;
        benchmark::DoNotOptimize(
            f.family.metric_grad(std::span<const double>(s.data(), 1), t, p));
    }
}
BENCHMARK(BM_FieldEval);

void BM_WindowTransport(benchmark::State& state) {
    auto& f = fixture();
    Tolerances tol;
    const ChartPoint from = f.pair->cp("c0_0").at;
    const ParamHomotopy slice = f.family.slice_leading(0.37);
    for (auto _ : state)
        benchmark::DoNotOptimize(transport_window(slice, {}, from, Direction::Forward, tol));
}
BENCHMARK(BM_WindowTransport);

void BM_SettleFlow(benchmark::State& state) {
    auto& f = fixture();
    Tolerances tol;
    FlowSpec spec = FlowSpec::autonomous(*f.pair);
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate(spec, {0, {0.9, 0.5}}, Direction::Forward, tol).end_label);
}
BENCHMARK(BM_SettleFlow);

} // namespace

BENCHMARK_MAIN();
