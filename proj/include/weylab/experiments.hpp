#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weylab/counting.hpp"
#include "weylab/covering.hpp"
#include "weylab/forms.hpp"
#include "weylab/geometry.hpp"
#include "weylab/semiclassics.hpp"

namespace weylab {

struct ScanRow {
  double lambda = 0.0;
  std::int64_t count = 0;
  double prediction = 0.0;
  double ratio = 0.0;
  std::vector<std::pair<std::string, double>> aux;  // same keys on every row
};

struct ScanAssertion {
  std::string invariant;
  bool pass = false;
  std::string detail;
};

struct ScanReport {
  std::string experiment;
  std::vector<ScanRow> rows;
  std::vector<std::pair<std::string, std::string>> parameters;  // ordered echo
  std::vector<ScanAssertion> assertions;
  bool exploratory = false;

  bool all_pass() const;
  // Header lambda,count,prediction,ratio plus one column per aux key.
  void write_csv(std::ostream& os) const;
};

struct ScanOptions {
  int threads = 1;
  // Allowed worsening of |ratio - 1| between the two largest lambda rows
  // before the trend assertion trips.
  double trend_slack = 0.1;
  std::uint64_t seed = 1;
};

// Weyl's law on the Neumann Laplacian (V = 0): counts vs the leading term.
// Resolution guard: 1/sqrt(lambda_max) >= 4h.
ScanReport weyl_scan(const Domain2D& domain, double h, const std::vector<double>& lambdas,
                     const ScanOptions& opts = {});

// Schroedinger variant: N(-Delta + lambda V) at threshold 0 vs the
// phase-space prediction.  Guard additionally scales with max|V|.
ScanReport schrodinger_weyl_scan(const Domain2D& domain, const PotentialSpec& V, double h,
                                 const std::vector<double>& lambdas,
                                 const ScanOptions& opts = {});

struct SplitResult {
  std::int64_t lhs = 0;
  std::int64_t rhs1 = 0;
  std::int64_t rhs2 = 0;
  std::int64_t clipped = 0;  // positive samples of V - V_n clipped to zero
};

// Form splitting: N(-Delta + lambda V) <= N((1-delta)(-Delta) + lambda V_n)
//                                        + N(delta(-Delta) + lambda (V-V_n)).
// Exact integer inequality whenever no clipping was needed; strict mode turns
// required clipping into an error.
SplitResult splitting_check(const GridMask& m, const PotentialField& V,
                            const PotentialField& V_n, double delta, double lambda,
                            bool strict = false, const CountOptions& copts = {});
SplitResult splitting_check(const Domain2D& domain, const PotentialSpec& V,
                            const PotentialSpec& V_n, double delta, double lambda, double h,
                            bool strict = false);

// Compactly-supported approximant of V: clamped at depth n, zeroed within
// distance 1/n of the boundary.
PotentialField make_vn_approximant(const GridMask& m, const PotentialField& V, int n);

// CLR boundedness proxy: ratio rows N(lambda V)/lambda^{d/2} with the fitted
// bound proxy; refuses potentials whose triple norm is not finite at h.
ScanReport clr_scan(const Domain2D& domain, const PotentialSpec& V,
                    const ParameterSet& params, double h, const std::vector<double>& lambdas,
                    const ScanOptions& opts = {});

// Exploratory blow-up probe on a gamma-Hoelder graph domain with
// V = -dist^(-alpha): L^{d/2} quadrature must stabilize under h-halving while
// the weighted triple-norm part diverges; counts are taken at the finest h.
ScanReport blowup_scan(double gamma, double alpha, const std::vector<double>& h_sequence,
                       const std::vector<double>& lambdas, const ScanOptions& opts = {},
                       const std::optional<ParameterSet>& params_override = std::nullopt);

// Rooms-and-passages low-lying mode accumulation at a fixed small lambda.
ScanReport rooms_probe(const std::vector<int>& n_rooms_list, double lambda_small, double h,
                       const ScanOptions& opts = {});

}  // namespace weylab
