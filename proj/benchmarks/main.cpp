#include <benchmark/benchmark.h>

// The distro's libbenchmark_main.a ships LTO bytecode from a different
// compiler minor; spelling out the main avoids linking it.
BENCHMARK_MAIN();
