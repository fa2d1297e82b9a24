#include <benchmark/benchmark.h>

#include "varsub/embedding.hpp"
#include "varsub/parse.hpp"

namespace {

using namespace varsub;

JetSpace plane_space() { return {"t", {"x1", "x2"}, 2}; }

// Coupled first-integral system used as the standing workload: nontrivial
// products of derivatives in both components.
SourceForm coupled_system() {
    JetSpace js = plane_space();
    ParseContext ctx{js, {}};
    SourceForm sf;
    sf.space = js;
    sf.components = {
        parse_expr("x2' + x1'*(x1'*x1'' + x2'*x2'')", ctx),
        parse_expr("-x1' + x2'*(x1'*x1'' + x2'*x2'')", ctx),
    };
    return sf;
}

Embedding unit_circle() {
    return make_catalog_embedding("circle", {Rational(1)}, plane_space());
}

void BM_parse(benchmark::State& state) {
    JetSpace js = plane_space();
    ParseContext ctx{js, {}};
    for (auto _ : state)
        benchmark::DoNotOptimize(parse_expr("x2' + x1'*(x1'*x1'' + x2'*x2'')", ctx));
}
BENCHMARK(BM_parse);

void BM_simplify_expand(benchmark::State& state) {
    JetSpace js = plane_space();
    ParseContext ctx{js, {}};
    Expr e = parse_expr("(x1 + x2 + x1'*x2')^4", ctx);
    for (auto _ : state) benchmark::DoNotOptimize(simplify(e));
}
BENCHMARK(BM_simplify_expand);

void BM_total_derivative(benchmark::State& state) {
    JetSpace js = plane_space();
    ParseContext ctx{js, {}};
    Expr e = parse_expr("sin(x1*x2')*x1'' + exp(x2)*x1'^3", ctx);
    for (auto _ : state) benchmark::DoNotOptimize(total_derivative(e, js));
}
BENCHMARK(BM_total_derivative);

void BM_euler_lagrange(benchmark::State& state) {
    JetSpace js = plane_space();
    ParseContext ctx{js, {}};
    Lagrangian lag{js, parse_expr("1/2*(x1'^2 + x2'^2) - cos(x1)*x2 + x1*x2^2", ctx)};
    for (auto _ : state) benchmark::DoNotOptimize(euler_lagrange(lag));
}
BENCHMARK(BM_euler_lagrange);

void BM_helmholtz_verdict(benchmark::State& state) {
    SourceForm sf = coupled_system();
    OracleConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(helmholtz(sf, cfg));
}
BENCHMARK(BM_helmholtz_verdict);

void BM_induce_circle(benchmark::State& state) {
    SourceForm sf = coupled_system();
    Embedding e = unit_circle();
    for (auto _ : state) benchmark::DoNotOptimize(induce_source_form(sf, e));
}
BENCHMARK(BM_induce_circle);

void BM_submanifold_check(benchmark::State& state) {
    SourceForm sf = coupled_system();
    Embedding e = unit_circle();
    OracleConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(is_variational_submanifold(sf, e, cfg));
}
BENCHMARK(BM_submanifold_check);

} // namespace

BENCHMARK_MAIN();
