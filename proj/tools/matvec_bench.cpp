// Compares the OpenMP sparse matvec against the serial reference on the
// coupled Hamiltonian and reports the max deviation.
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "fockbath/hamiltonian.hpp"
#include "fockbath/presets.hpp"

using namespace fockbath;

int main(int argc, char** argv) {
  const int atoms = argc > 1 ? std::atoi(argv[1]) : 20;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 50;

  const ModelSpec spec = paper_model(atoms);
  const BasisIndex basis = spec.make_basis();
  const SparseOperator h =
      build_bath(spec, basis).plus(build_coupling(spec, basis, spec.params.C));
  std::printf("N=%d dim=%lld nnz=%lld repeats=%d\n", atoms,
              static_cast<long long>(h.dim()), static_cast<long long>(h.nnz()), repeats);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> dist;
  std::vector<Complex> x(static_cast<std::size_t>(h.dim()));
  for (auto& v : x) v = Complex(dist(rng), dist(rng));
  std::vector<Complex> y_par(x.size()), y_ser(x.size());

  const auto time_of = [&](auto&& f) {
    const auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < repeats; ++r) f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() /
           repeats;
  };
  const double t_par = time_of([&] { h.apply(std::span<const Complex>(x), std::span<Complex>(y_par)); });
  const double t_ser =
      time_of([&] { h.apply_serial(std::span<const Complex>(x), std::span<Complex>(y_ser)); });

  double max_dev = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) max_dev = std::max(max_dev, std::abs(y_par[i] - y_ser[i]));

  std::printf("parallel: %.3e s/matvec (%.2f GFLOP/s)\n", t_par,
              8e-9 * static_cast<double>(h.nnz()) / t_par);
  std::printf("serial:   %.3e s/matvec (%.2f GFLOP/s)\n", t_ser,
              8e-9 * static_cast<double>(h.nnz()) / t_ser);
  std::printf("speedup:  %.2fx, max deviation %.3e\n", t_ser / t_par, max_dev);
  return max_dev < 1e-12 ? 0 : 1;
}
