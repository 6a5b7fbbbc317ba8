#include "weylab/common.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace weylab {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::resolution_too_coarse: return "resolution-too-coarse";
    case Errc::singular_sample: return "singular-sample";
    case Errc::oracle_scale_exceeded: return "oracle-scale-exceeded";
    case Errc::numerical_breakdown: return "numerical-breakdown";
    case Errc::invalid_partition: return "invalid-partition";
    case Errc::invalid_policy: return "invalid-policy";
    case Errc::singular_weight: return "singular-weight";
    case Errc::invalid_configuration: return "invalid-configuration";
    case Errc::decomposition_not_exact: return "decomposition-not-exact";
    case Errc::alpha_too_large: return "alpha-too-large";
  }
  return "unknown-error";
}

void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

int resolve_threads(int requested) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (requested <= 0) return hw;
  return std::min(requested, hw);
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  int t = (threads >= 1) ? threads : resolve_threads(0);
  if (t <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(t), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<std::size_t> counter{0};
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&fn, &counter, n] {
      for (;;) {
        std::size_t i = counter.fetch_add(1);
        if (i >= n) break;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

std::uint64_t Rng::next_u64() {
  // splitmix64 (public-domain reference constants)
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi <= lo) return lo;
  std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(next_u64() % span);
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace weylab
