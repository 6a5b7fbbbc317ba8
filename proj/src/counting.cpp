#include "weylab/counting.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "weylab/common.hpp"

namespace weylab {

namespace {

double next_shift(double lam, const CountOptions& opts) {
  return lam * (1.0 + opts.shift_rel) + opts.shift_rel;
}

void validate_square(const Eigen::SparseMatrix<double>& A, const char* who) {
  require(A.rows() == A.cols(), Errc::invalid_argument,
          std::string(who) + ": matrix must be square");
}

}  // namespace

CountRecord count_below_inertia(const Eigen::SparseMatrix<double>& A, double lambda,
                                const CountOptions& opts) {
  validate_square(A, "count_below_inertia");
  require(std::isfinite(lambda), Errc::invalid_argument,
          "count_below_inertia: lambda must be finite");
  const int n = static_cast<int>(A.rows());
  if (n == 0) return CountRecord{lambda, 0, CountMethod::Inertia, 0.0};

  Eigen::SparseMatrix<double> id(n, n);
  id.setIdentity();

  double lam = lambda;
  for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
    // Subtracting lam*id (not editing the diagonal in place) keeps the
    // diagonal structurally present even where A stores no entry.
    Eigen::SparseMatrix<double> B = A - lam * id;

    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(B.coeff(i, i)));
    const double tol = opts.pivot_tol_rel * max_diag;

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(B);
    if (ldlt.info() == Eigen::Success) {
      const Eigen::VectorXd& d = ldlt.vectorD();
      bool degenerate = false;
      std::int64_t neg = 0;
      for (int i = 0; i < n; ++i) {
        const double di = d[i];
        if (!std::isfinite(di) || std::abs(di) <= tol) {
          degenerate = true;
          break;
        }
        if (di < 0.0) ++neg;
      }
      if (!degenerate) {
        return CountRecord{lambda, neg, CountMethod::Inertia, lam - lambda};
      }
    }
    lam = next_shift(lam, opts);
  }
  fail(Errc::numerical_breakdown,
       "count_below_inertia: factorization still degenerate after " +
           std::to_string(opts.max_retries) + " shifted retries at lambda = " +
           std::to_string(lambda));
}

CountRecord count_below_dense(const Eigen::SparseMatrix<double>& A, double lambda,
                              const CountOptions& opts) {
  validate_square(A, "count_below_dense");
  require(std::isfinite(lambda), Errc::invalid_argument,
          "count_below_dense: lambda must be finite");
  const int n = static_cast<int>(A.rows());
  require(n <= 4000, Errc::oracle_scale_exceeded,
          "count_below_dense: n = " + std::to_string(n) + " exceeds the 4000-row cap");
  if (n == 0) return CountRecord{lambda, 0, CountMethod::Dense, 0.0};

  Eigen::MatrixXd dense(A);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
  require(solver.info() == Eigen::Success, Errc::numerical_breakdown,
          "count_below_dense: eigendecomposition failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending

  double scale = 1.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(ev[i]));
  const double tol = opts.pivot_tol_rel * scale;

  double lam = lambda;
  for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
    bool coincides = false;
    std::int64_t below = 0;
    for (int i = 0; i < n; ++i) {
      if (std::abs(ev[i] - lam) <= tol) {
        coincides = true;
        break;
      }
      if (ev[i] < lam) ++below;
    }
    if (!coincides) return CountRecord{lambda, below, CountMethod::Dense, lam - lambda};
    lam = next_shift(lam, opts);
  }
  fail(Errc::numerical_breakdown,
       "count_below_dense: lambda keeps coinciding with eigenvalues after retries");
}

CountRecord count_below(const DiscreteForm& form, double lambda, const CountOptions& opts) {
  return count_below_inertia(form.A, lambda, opts);
}

std::vector<CountRecord> count_scan(const Eigen::SparseMatrix<double>& A,
                                    const std::vector<double>& lambdas, int threads,
                                    CountMethod method, const CountOptions& opts) {
  require(!lambdas.empty(), Errc::invalid_argument, "count_scan: empty lambda grid");
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    require(lambdas[i] > lambdas[i - 1], Errc::invalid_argument,
            "count_scan: lambda grid must be strictly increasing");
  }
  std::vector<CountRecord> out(lambdas.size());
  parallel_for(lambdas.size(), threads, [&](std::size_t i) {
    out[i] = (method == CountMethod::Inertia) ? count_below_inertia(A, lambdas[i], opts)
                                              : count_below_dense(A, lambdas[i], opts);
  });
  return out;
}

void write_count_csv(const std::vector<CountRecord>& records, std::ostream& os) {
  os << "lambda,count,method,shift_applied\n";
  char buf[128];
  for (const auto& rec : records) {
    std::snprintf(buf, sizeof buf, "%.12g,%lld,%s,%.12g\n", rec.lambda,
                  static_cast<long long>(rec.count),
                  rec.method == CountMethod::Inertia ? "inertia" : "dense",
                  rec.shift_applied);
    os << buf;
  }
}

}  // namespace weylab
