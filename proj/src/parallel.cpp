#include "rootscat/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace rootscat {

namespace {
std::atomic<int> g_workers{1};

template <class T>
T psum(const T* x, std::size_t n) {
  if (n == 0) return T{};
  if (n <= 8) {
    T s = x[0];
    for (std::size_t i = 1; i < n; ++i) s += x[i];
    return s;
  }
  std::size_t h = n / 2;
  return psum(x, h) + psum(x + h, n - h);
}
}  // namespace

void set_workers(int n) { g_workers = std::max(1, n); }
int workers() { return g_workers; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(g_workers.load()), n);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex mu;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += w) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

double pairwise_sum(const double* x, std::size_t n) { return psum(x, n); }
std::complex<double> pairwise_sum(const std::complex<double>* x, std::size_t n) { return psum(x, n); }

}  // namespace rootscat
