#pragma once
// Worker pool setting and deterministic reductions.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace rootscat {

void set_workers(int n);  // n < 1 resets to 1
int workers();

// Runs body(i) for i in [0, n).  Each index is visited exactly once; the
// caller must make iterations write to disjoint slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Pairwise summation, independent of the worker count.
double pairwise_sum(const double* x, std::size_t n);
std::complex<double> pairwise_sum(const std::complex<double>* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }
inline std::complex<double> pairwise_sum(const std::vector<std::complex<double>>& v) {
  return pairwise_sum(v.data(), v.size());
}

}  // namespace rootscat
