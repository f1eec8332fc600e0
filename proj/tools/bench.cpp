// Throughput benchmark: serial reference vs OpenMP-parallel shot loops for
// the binomial-criterion DSS sampler and the direct MC baseline. Also checks
// that the parallel tree is identical to the serial one.

#include <chrono>
#include <iostream>

#include "dss/protocols.hpp"
#include "dss/sampler.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void bench_protocol(const std::string& name, const dss::NoiseParams& noise, std::uint64_t shots,
                    int workers) {
    const dss::ProtocolGraph protocol = dss::make_protocol(name);

    dss::DssOptions serial;
    serial.stop.max_shots = shots;
    serial.seed = 7;
    serial.workers = 1;
    auto t0 = std::chrono::steady_clock::now();
    const dss::DssResult ref = dss_run(protocol, noise, serial);
    const double t_serial = seconds_since(t0);

    dss::DssOptions parallel = serial;
    parallel.workers = workers;
    t0 = std::chrono::steady_clock::now();
    const dss::DssResult par = dss_run(protocol, noise, parallel);
    const double t_parallel = seconds_since(t0);

    const bool identical = ref.tree.dump() == par.tree.dump();
    std::cout << name << " dss " << shots << " shots: serial " << t_serial << "s, " << workers
              << " workers " << t_parallel << "s, speedup " << t_serial / t_parallel
              << (identical ? " (trees identical)" : " (TREE MISMATCH)") << "\n";

    dss::McOptions mc;
    mc.shots = shots;
    mc.seed = 7;
    mc.workers = 1;
    t0 = std::chrono::steady_clock::now();
    const dss::McResult mc_ref = mc_run(protocol, noise, mc);
    const double mc_serial = seconds_since(t0);
    mc.workers = workers;
    t0 = std::chrono::steady_clock::now();
    const dss::McResult mc_par = mc_run(protocol, noise, mc);
    const double mc_parallel = seconds_since(t0);
    std::cout << name << " mc  " << shots << " shots: serial " << mc_serial << "s, " << workers
              << " workers " << mc_parallel << "s, speedup " << mc_serial / mc_parallel
              << (mc_ref.failures == mc_par.failures ? " (counts identical)" : " (COUNT MISMATCH)")
              << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    int workers = 4;
#ifdef _OPENMP
    workers = omp_get_max_threads();
#endif
    if (argc > 1) workers = std::atoi(argv[1]);

    bench_protocol("ghz", dss::NoiseParams::single_parameter(1e-3), 20000, workers);
    bench_protocol("steane-det-0", dss::NoiseParams::two_parameter(1e-3, 1e-2), 20000, workers);
    bench_protocol("steane-flag-0", dss::NoiseParams::single_parameter(1e-2), 5000, workers);
    return 0;
}
