#pragma once

#include <Eigen/SparseCore>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "weylab/forms.hpp"

namespace weylab {

enum class CountMethod { Inertia, Dense };

struct CountRecord {
  double lambda = 0.0;         // the requested threshold
  std::int64_t count = 0;      // #eigenvalues strictly below the effective threshold
  CountMethod method = CountMethod::Inertia;
  double shift_applied = 0.0;  // effective lambda minus requested (0 if none)
};

struct CountOptions {
  double pivot_tol_rel = 1e-12;  // pivot/eigenvalue coincidence tolerance, relative
  double shift_rel = 1e-8;       // retry shift: lambda <- lambda*(1+shift_rel)+shift_rel
  int max_retries = 3;
};

// N(A - lambda) by Sylvester inertia: the number of negative pivots in the
// LDL^T factorization of A - lambda*I (fill-reducing AMD ordering).  A pivot
// within pivot_tol_rel * max|diag(A - lambda I)| of zero means lambda sits on
// (or numerically at) an eigenvalue; the threshold is then nudged up and the
// factorization retried, so exact kernels (e.g. Neumann constants at
// lambda = 0) are counted as "below".
CountRecord count_below_inertia(const Eigen::SparseMatrix<double>& A, double lambda,
                                const CountOptions& opts = {});

// Reference implementation via a full symmetric eigendecomposition; refuses
// matrices beyond 4000 rows.  Applies the same shift rule when lambda
// coincides with an eigenvalue.
CountRecord count_below_dense(const Eigen::SparseMatrix<double>& A, double lambda,
                              const CountOptions& opts = {});

CountRecord count_below(const DiscreteForm& form, double lambda,
                        const CountOptions& opts = {});

// Counts for a strictly increasing lambda grid; work items are distributed
// across threads, each owning its factorization workspace.
std::vector<CountRecord> count_scan(const Eigen::SparseMatrix<double>& A,
                                    const std::vector<double>& lambdas, int threads = 1,
                                    CountMethod method = CountMethod::Inertia,
                                    const CountOptions& opts = {});

// CSV with header lambda,count,method,shift_applied.
void write_count_csv(const std::vector<CountRecord>& records, std::ostream& os);

}  // namespace weylab
