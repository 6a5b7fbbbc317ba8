#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace weylab {

// Failure vocabulary shared by every module.  Each enumerator maps to a
// stable kebab-case name (errc_name) used in CLI diagnostics, so callers can
// match on either the code or the string.
enum class Errc {
  invalid_argument,
  resolution_too_coarse,
  singular_sample,
  oracle_scale_exceeded,
  numerical_breakdown,
  invalid_partition,
  invalid_policy,
  singular_weight,
  invalid_configuration,
  decomposition_not_exact,
  alpha_too_large,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& msg);

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

// Runs fn(i) for i in [0, n).  Work items must write to disjoint slots; no
// ordering is guaranteed.  threads <= 1 runs inline (the common case on
// small machines); 0 means "use the hardware count".
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// Clamp a requested thread count against the hardware (0 => hardware count).
int resolve_threads(int requested);

// Deterministic splitmix64 stream; used wherever reproducible pseudo-random
// draws are needed so results do not depend on libstdc++'s distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double next_double();                    // uniform in [0, 1)
  double uniform(double lo, double hi);    // uniform in [lo, hi)
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);  // inclusive

 private:
  std::uint64_t state_;
};

// h^k for small integer k, computed by repeated multiplication so that
// h^2 == h*h bitwise (std::pow may differ in the last ulp).
double ipow(double x, int k);

}  // namespace weylab
