// Compares the serial and OpenMP exhaustive-verification kernels on the
// two constructions across a range of sizes.

#include <chrono>
#include <cstdio>

#include "sortnet/constructions.hpp"
#include "sortnet/verify.hpp"

using namespace sortnet;

namespace {

double seconds(void (*kernel)(const Network&), const Network& net) {
    const auto start = std::chrono::steady_clock::now();
    kernel(net);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void run_serial(const Network& net) {
    if (!verify_exhaustive_serial(net).ok())
        std::puts("unexpected counterexample");
}

void run_parallel(const Network& net) {
    if (!verify_exhaustive(net).ok())
        std::puts("unexpected counterexample");
}

}  // namespace

int main() {
    std::printf("%-14s %4s %12s %12s %8s\n", "construction", "n", "serial_s", "openmp_s",
                "speedup");
    for (int n : {16, 18, 20, 22}) {
        for (int variant = 0; variant < 2; ++variant) {
            const Network net = variant == 0 ? build_depth3(n) : build_columnsort4(n);
            const char* name = variant == 0 ? "depth3" : "columnsort4";
            const double serial = seconds(run_serial, net);
            const double parallel = seconds(run_parallel, net);
            std::printf("%-14s %4d %12.4f %12.4f %8.2f\n", name, n, serial, parallel,
                        serial / parallel);
        }
    }
    return 0;
}
