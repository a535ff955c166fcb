// Timing comparison between the OpenMP distance kernel and its serial
// reference on subcritical cores of increasing size.  Both paths must agree
// exactly; the serial one exists so tests can pin down the parallel one.

#include <chrono>
#include <cstdint>
#include <cstdio>

#include "critnoise/components.hpp"
#include "critnoise/distances.hpp"
#include "critnoise/rng.hpp"
#include "critnoise/sampling.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace critnoise;

namespace {

template <typename F>
double time_call(F&& f, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("omp max threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run serial code\n");
#endif
  std::printf("%10s %12s %12s %8s %8s\n", "n", "parallel(s)", "serial(s)",
              "speedup", "agree");
  for (const std::uint64_t n : {50000ull, 200000ull, 500000ull}) {
    const NoiseParams params = noise_params_from_theta(n, 0.0, 0.1);
    Rng rng = derive_stream(7, n, StreamPurpose::core);
    const Graph g = sample_gnp(n, params.p0, rng);
    const ComponentDecomposition d = components(g);
    DistanceStats par, ser;
    const int reps = n <= 50000 ? 5 : 2;
    const double tp =
        time_call([&] { par = distance_stats(g, d); }, reps);
    const double ts =
        time_call([&] { ser = distance_stats_serial(g, d); }, reps);
    const bool agree = par.z_total == ser.z_total &&
                       par.d_max == ser.d_max &&
                       par.diameters == ser.diameters;
    std::printf("%10llu %12.4f %12.4f %8.2f %8s\n",
                static_cast<unsigned long long>(n), tp, ts,
                ts / (tp > 0 ? tp : 1e-12), agree ? "yes" : "NO");
    if (!agree) return 1;
  }
  return 0;
}
