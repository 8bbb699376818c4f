#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>
#include <vector>

#include "qxlab/nn/kernels.hpp"

namespace k = qxlab::nn::kernels;

namespace {

struct Layer {
  std::size_t n, in, out;
  std::vector<double> x, w, b, y, dy, dw, db, dx;

  Layer(std::size_t n_, std::size_t in_, std::size_t out_)
      : n(n_), in(in_), out(out_), x(n * in), w(in * out), b(out), y(n * out), dy(n * out), dw(in * out), db(out), dx(n * in) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto* v : {&x, &w, &b, &dy})
      for (double& e : *v) e = u(rng);
  }
};

// args: rows, input width, output width
void shapes(benchmark::internal::Benchmark* bm) {
  for (long n : {128L, 1024L, 8192L}) {
    bm->Args({n, 64, 64});
    bm->Args({n, 256, 256});
  }
  bm->Args({8192, 64, 1});
}

template <auto Fn>
void forward(benchmark::State& state) {
  Layer l(state.range(0), state.range(1), state.range(2));
  for (auto _ : state) {
    Fn(l.x.data(), l.w.data(), l.b.data(), l.y.data(), l.n, l.in, l.out);
    benchmark::DoNotOptimize(l.y.data());
  }
  state.counters["MAC/s"] = benchmark::Counter(static_cast<double>(l.n * l.in * l.out) * state.iterations(),
                                                benchmark::Counter::kIsRate);
  state.counters["threads"] = omp_get_max_threads();
}

template <auto Fn>
void param_grad(benchmark::State& state) {
  Layer l(state.range(0), state.range(1), state.range(2));
  for (auto _ : state) {
    Fn(l.x.data(), l.dy.data(), l.dw.data(), l.db.data(), l.n, l.in, l.out);
    benchmark::DoNotOptimize(l.dw.data());
  }
  state.counters["MAC/s"] = benchmark::Counter(static_cast<double>(l.n * l.in * l.out) * state.iterations(),
                                                benchmark::Counter::kIsRate);
}

template <auto Fn>
void input_grad(benchmark::State& state) {
  Layer l(state.range(0), state.range(1), state.range(2));
  for (auto _ : state) {
    Fn(l.dy.data(), l.w.data(), l.dx.data(), l.n, l.in, l.out);
    benchmark::DoNotOptimize(l.dx.data());
  }
  state.counters["MAC/s"] = benchmark::Counter(static_cast<double>(l.n * l.in * l.out) * state.iterations(),
                                                benchmark::Counter::kIsRate);
}

}  // namespace

BENCHMARK(forward<k::serial::affine_forward>)->Name("forward/serial")->Apply(shapes);
BENCHMARK(forward<k::parallel::affine_forward>)->Name("forward/parallel")->Apply(shapes)->UseRealTime();
BENCHMARK(param_grad<k::serial::affine_param_grad>)->Name("param_grad/serial")->Apply(shapes);
BENCHMARK(param_grad<k::parallel::affine_param_grad>)->Name("param_grad/parallel")->Apply(shapes)->UseRealTime();
BENCHMARK(input_grad<k::serial::affine_input_grad>)->Name("input_grad/serial")->Apply(shapes);
BENCHMARK(input_grad<k::parallel::affine_input_grad>)->Name("input_grad/parallel")->Apply(shapes)->UseRealTime();

BENCHMARK_MAIN();
