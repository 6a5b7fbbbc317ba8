#include "weylab/forms.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace weylab {

namespace {

PotentialField finalize_samples(std::vector<double> raw, const GridMask& m,
                                const std::string& provenance) {
  PotentialField field;
  field.provenance = provenance;
  field.values = std::move(raw);
  std::int64_t idx = 0;
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (!m.included(r, c)) continue;
      double& v = field.values[static_cast<std::size_t>(idx)];
      if (!std::isfinite(v)) {
        fail(Errc::singular_sample,
             "sample_potential: non-finite value at cell (" + std::to_string(r) + ", " +
                 std::to_string(c) + ") [" + provenance + "]");
      }
      if (v > 0.0) {
        v = 0.0;
        ++field.clipped;
      }
      ++idx;
    }
  }
  return field;
}

}  // namespace

PotentialField sample_potential(const GridMask& m,
                                const std::function<double(double, double)>& f,
                                const std::string& provenance) {
  std::vector<double> raw;
  raw.reserve(static_cast<std::size_t>(m.cell_count()));
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (m.included(r, c)) raw.push_back(f(m.center_x(c), m.center_y(r)));
  return finalize_samples(std::move(raw), m, provenance);
}

PotentialField sample_potential(const GridMask& m, const PotentialSpec& spec) {
  if (std::holds_alternative<ZeroPotential>(spec)) {
    PotentialField field;
    field.values.assign(static_cast<std::size_t>(m.cell_count()), 0.0);
    field.provenance = "zero";
    return field;
  }
  if (const auto* c = std::get_if<ConstantPotential>(&spec)) {
    require(std::isfinite(c->value), Errc::invalid_argument,
            "ConstantPotential: value must be finite");
    return sample_potential(
        m, [v = c->value](double, double) { return v; },
        "constant(" + std::to_string(c->value) + ")");
  }
  if (const auto* dp = std::get_if<DistancePowerPotential>(&spec)) {
    require(std::isfinite(dp->alpha) && dp->alpha > 0.0, Errc::invalid_argument,
            "DistancePowerPotential: alpha must be positive");
    require(std::isfinite(dp->amplitude) && dp->amplitude > 0.0, Errc::invalid_argument,
            "DistancePowerPotential: amplitude must be positive");
    const std::vector<double> dist = distance_to_boundary(m);
    PotentialField field;
    field.provenance = "dist_power(alpha=" + std::to_string(dp->alpha) + ")";
    field.values.reserve(dist.size());
    for (std::size_t i = 0; i < dist.size(); ++i) {
      const double v = -dp->amplitude * std::pow(dist[i], -dp->alpha);
      if (!std::isfinite(v)) {
        fail(Errc::singular_sample,
             "DistancePowerPotential: non-finite sample at ordinal " + std::to_string(i));
      }
      field.values.push_back(v);
    }
    return field;
  }
  if (const auto* hp = std::get_if<HalfPlanePotential>(&spec)) {
    require(std::isfinite(hp->depth) && hp->depth >= 0.0, Errc::invalid_argument,
            "HalfPlanePotential: depth must be >= 0");
    return sample_potential(
        m, [s = hp->split_x, d = hp->depth](double x, double) { return x < s ? -d : 0.0; },
        "half_plane(split=" + std::to_string(hp->split_x) + ")");
  }
  const auto& b = std::get<BumpPotential>(spec);
  require(std::isfinite(b.radius) && b.radius > 0.0, Errc::invalid_argument,
          "BumpPotential: radius must be positive");
  require(std::isfinite(b.depth) && b.depth >= 0.0, Errc::invalid_argument,
          "BumpPotential: depth must be >= 0");
  return sample_potential(
      m,
      [b](double x, double y) {
        const double r2 = ((x - b.cx) * (x - b.cx) + (y - b.cy) * (y - b.cy)) /
                          (b.radius * b.radius);
        const double t = std::max(0.0, 1.0 - r2);
        return -b.depth * t * t;
      },
      "bump(depth=" + std::to_string(b.depth) + ")");
}

namespace {

void check_field(const GridMask& m, const PotentialField& V, const char* who) {
  require(V.values.size() == static_cast<std::size_t>(m.cell_count()), Errc::invalid_argument,
          std::string(who) + ": potential field size does not match mask");
  for (std::size_t i = 0; i < V.values.size(); ++i) {
    require(std::isfinite(V.values[i]) && V.values[i] <= 0.0, Errc::invalid_argument,
            std::string(who) + ": potential must be finite and nonpositive (ordinal " +
                std::to_string(i) + ")");
  }
}

}  // namespace

DiscreteForm assemble_neumann(const GridMask& m, const PotentialField& V) {
  check_field(m, V, "assemble_neumann");
  const std::int64_t n = m.cell_count();
  const double w = 1.0 / (m.h() * m.h());
  const std::vector<std::int64_t> ord = m.ordinal_map();

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(5 * n));
  for (std::int64_t i = 0; i < n; ++i)
    trip.emplace_back(static_cast<int>(i), static_cast<int>(i),
                      V.values[static_cast<std::size_t>(i)]);

  // Each included-included edge contributes (u_i - u_j)^2 / h^2; visiting
  // only the right and upper neighbor covers each edge once.
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (!m.included(r, c)) continue;
      const auto i = static_cast<int>(ord[static_cast<std::size_t>(r) * m.cols() + c]);
      const int nbr_r[2] = {r, r + 1};
      const int nbr_c[2] = {c + 1, c};
      for (int k = 0; k < 2; ++k) {
        const int rr = nbr_r[k], cc = nbr_c[k];
        if (rr >= m.rows() || cc >= m.cols() || !m.included(rr, cc)) continue;
        const auto j = static_cast<int>(ord[static_cast<std::size_t>(rr) * m.cols() + cc]);
        trip.emplace_back(i, i, w);
        trip.emplace_back(j, j, w);
        trip.emplace_back(i, j, -w);
        trip.emplace_back(j, i, -w);
      }
    }
  }

  DiscreteForm form;
  form.A.resize(static_cast<int>(n), static_cast<int>(n));
  form.A.setFromTriplets(trip.begin(), trip.end());
  form.bc = BoundaryCondition::Neumann;
  form.h = m.h();
  return form;
}

DiscreteForm assemble_dirichlet(const GridMask& m, const PotentialField& V) {
  check_field(m, V, "assemble_dirichlet");
  const std::int64_t n = m.cell_count();
  const double w = 1.0 / (m.h() * m.h());
  const std::vector<std::int64_t> ord = m.ordinal_map();

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(5 * n));
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (!m.included(r, c)) continue;
      const auto i = static_cast<int>(ord[static_cast<std::size_t>(r) * m.cols() + c]);
      // Zero extension: all four neighbor slots hit the diagonal whether or
      // not the neighbor exists.
      trip.emplace_back(i, i, 4.0 * w + V.values[static_cast<std::size_t>(i)]);
      const int nbr_r[2] = {r, r + 1};
      const int nbr_c[2] = {c + 1, c};
      for (int k = 0; k < 2; ++k) {
        const int rr = nbr_r[k], cc = nbr_c[k];
        if (rr >= m.rows() || cc >= m.cols() || !m.included(rr, cc)) continue;
        const auto j = static_cast<int>(ord[static_cast<std::size_t>(rr) * m.cols() + cc]);
        trip.emplace_back(i, j, -w);
        trip.emplace_back(j, i, -w);
      }
    }
  }

  DiscreteForm form;
  form.A.resize(static_cast<int>(n), static_cast<int>(n));
  form.A.setFromTriplets(trip.begin(), trip.end());
  form.bc = BoundaryCondition::Dirichlet;
  form.h = m.h();
  return form;
}

void write_matrix_market(const Eigen::SparseMatrix<double>& A, std::ostream& os) {
  require(A.rows() == A.cols(), Errc::invalid_argument,
          "write_matrix_market: matrix must be square");
  std::int64_t nnz_lower = 0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      if (it.row() >= it.col()) ++nnz_lower;

  os << "%%MatrixMarket matrix coordinate real symmetric\n";
  os << A.rows() << " " << A.cols() << " " << nnz_lower << "\n";
  char buf[64];
  for (int k = 0; k < A.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
      if (it.row() < it.col()) continue;
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", static_cast<long>(it.row()) + 1,
                    static_cast<long>(it.col()) + 1, it.value());
      os << buf;
    }
  }
}

}  // namespace weylab
