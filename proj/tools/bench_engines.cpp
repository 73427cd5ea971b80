// Throughput comparison: serial reference vs the OpenMP batch runner,
// for both lifetime engines.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "standby/sim.hpp"

using namespace standby;

namespace {

template <typename F>
double time_call(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::int64_t count = argc > 1 ? std::atoll(argv[1]) : 200000;
  SystemConfig config(3, 2.0, WorkingTimeModel(DistributionSpec::exponential(1.0)));

  std::printf("%-10s %-10s %12s %12s %8s\n", "engine", "mode", "seconds",
              "runs/s", "mean");
  for (Engine engine : {Engine::EmbeddedChain, Engine::EventDriven}) {
    EmpiricalDistribution serial_result, parallel_result;
    const double t_serial = time_call([&] {
      serial_result = run_batch_serial(config, 1, count, 7, engine);
    });
    const double t_parallel = time_call([&] {
      parallel_result = run_batch(config, 1, count, 7, engine);
    });
    std::printf("%-10s %-10s %12.3f %12.0f %8.4f\n",
                engine_name(engine).c_str(), "serial", t_serial,
                count / t_serial, serial_result.mean);
    std::printf("%-10s %-10s %12.3f %12.0f %8.4f\n",
                engine_name(engine).c_str(), "openmp", t_parallel,
                count / t_parallel, parallel_result.mean);
    if (serial_result.samples != parallel_result.samples) {
      std::printf("MISMATCH: serial and openmp batches differ\n");
      return 1;
    }
  }
  return 0;
}
