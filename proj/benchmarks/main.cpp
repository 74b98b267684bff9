#include <benchmark/benchmark.h>

// The distribution's benchmark_main archive carries LTO bytecode from another
// compiler build, so the entry point lives here.
BENCHMARK_MAIN();
