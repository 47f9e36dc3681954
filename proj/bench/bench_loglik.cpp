// Timing comparison of the serial reference kernels against the OpenMP
// parallel ones, on a synthetic workload. Run: bench_loglik [nodes] [draws].

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "netchoice/logit.hpp"
#include "netchoice/mixed_logit.hpp"
#include "netchoice/synthetic.hpp"

using namespace netchoice;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int nodes = argc > 1 ? std::atoi(argv[1]) : 2000;
  const int draws = argc > 2 ? std::atoi(argv[2]) : 100;

  MixingSpec spec;
  spec.coefficients = {{"x", Family::Normal}, {"y", Family::LogNormal}};
  ThetaVector truth;
  truth.means = {3.0, 0.0};
  truth.scales = {2.0, 1.0};

  GenerateConfig cfg;
  cfg.n_nodes = nodes;
  const Dataset data = generate_network(cfg, spec, truth, RandomStream(7));
  const DatasetView view = DatasetView::build(data);
  std::printf("workload: %d sequences, %zu situations, R=%d\n", nodes,
              data.total_situations(), draws);

  const Eigen::VectorXd beta = (Eigen::VectorXd(2) << 2.0, 0.8).finished();
  RcOptions rc;
  rc.n_draws = draws;
  rc.seed = 11;

  // MNL log-likelihood + gradient
  auto t0 = std::chrono::steady_clock::now();
  const LogLikEval serial_mnl = reference::mnl_log_likelihood(beta, view);
  const double t_serial_mnl = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  const LogLikEval parallel_mnl = mnl_log_likelihood(beta, view);
  const double t_parallel_mnl = seconds_since(t0);
  std::printf("mnl loglik   serial %.4fs   parallel %.4fs   speedup %.2fx   |dLL| %.3g\n",
              t_serial_mnl, t_parallel_mnl, t_serial_mnl / t_parallel_mnl,
              std::abs(serial_mnl.ll - parallel_mnl.ll));

  // RC simulated log-likelihood
  t0 = std::chrono::steady_clock::now();
  const double serial_rc = reference::rc_simulated_loglik(data, spec, truth, rc);
  const double t_serial_rc = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  const double parallel_rc = rc_simulated_loglik(data, spec, truth, rc);
  const double t_parallel_rc = seconds_since(t0);
  std::printf("rc  loglik   serial %.4fs   parallel %.4fs   speedup %.2fx   |dLL| %.3g\n",
              t_serial_rc, t_parallel_rc, t_serial_rc / t_parallel_rc,
              std::abs(serial_rc - parallel_rc));

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#endif
  return 0;
}
