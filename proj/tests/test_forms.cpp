#include "doctest.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "weylab/common.hpp"
#include "weylab/forms.hpp"
#include "weylab/geometry.hpp"

using namespace weylab;

namespace {

GridMask row_mask(int k, double h) {
  return GridMask::from_cells(h, 0.0, 0.0, 1, k,
                              std::vector<std::uint8_t>(static_cast<std::size_t>(k), 1));
}

PotentialField zero_field(const GridMask& m) { return sample_potential(m, ZeroPotential{}); }

}  // namespace

TEST_SUITE_BEGIN("forms");

TEST_CASE("neumann rows sum to zero") {
  // Dyadic h makes 1/h^2 an integer, so the per-edge diagonal accumulation is
  // exact and constants are annihilated bitwise.
  {
    std::vector<std::uint8_t> cells(7 * 9, 1);
    cells[3 * 9 + 4] = 0;
    cells[0] = 0;
    const GridMask m = GridMask::from_cells(1.0 / 16.0, 0.0, 0.0, 7, 9, cells);
    const DiscreteForm form = assemble_neumann(m, zero_field(m));
    CHECK(form.bc == BoundaryCondition::Neumann);
    CHECK(form.h == m.h());
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(form.A.rows());
    const Eigen::VectorXd r = form.A * ones;
    for (Eigen::Index i = 0; i < r.size(); ++i) CHECK(r[i] == 0.0);
  }
  // Generic h: zero up to roundoff in the diagonal accumulation.
  Rng rng(2);
  for (int trial = 0; trial < 4; ++trial) {
    const GridMask m = oracle::random_mask(rng, 12, 15);
    const DiscreteForm form = assemble_neumann(m, zero_field(m));
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(form.A.rows());
    const Eigen::VectorXd r = form.A * ones;
    for (Eigen::Index i = 0; i < r.size(); ++i) CHECK(std::abs(r[i]) <= 1e-9);
  }
}

TEST_CASE("forms are symmetric with the expected stencil weights") {
  Rng rng(4);
  const GridMask m = oracle::random_mask(rng, 10, 11);
  for (auto bc : {BoundaryCondition::Neumann, BoundaryCondition::Dirichlet}) {
    const DiscreteForm form = bc == BoundaryCondition::Neumann
                                  ? assemble_neumann(m, zero_field(m))
                                  : assemble_dirichlet(m, zero_field(m));
    const Eigen::MatrixXd D(form.A);
    CHECK((D - D.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const double off = -1.0 / (m.h() * m.h());
    for (Eigen::Index i = 0; i < D.rows(); ++i)
      for (Eigen::Index j = 0; j < i; ++j)
        if (D(i, j) != 0.0) CHECK(D(i, j) == off);
  }
}

TEST_CASE("neumann row operator has the path-graph spectrum") {
  const int k = 12;
  const double h = 0.1;
  const GridMask m = row_mask(k, h);
  const DiscreteForm form = assemble_neumann(m, zero_field(m));
  const std::vector<double> eigs = oracle::dense_spectrum(form.A);
  const std::vector<double> expect = oracle::neumann_row_spectrum(k, h);
  REQUIRE(eigs.size() == expect.size());
  for (std::size_t j = 0; j < eigs.size(); ++j)
    CHECK(eigs[j] == doctest::Approx(expect[j]).epsilon(1e-10));
}

TEST_CASE("dirichlet row operator carries the transverse shift") {
  // Zero extension across the two long sides of a 1 x k row adds 2/h^2 to
  // every diagonal entry on top of the within-row Dirichlet chain.
  const int k = 9;
  const double h = 0.25;
  const GridMask m = row_mask(k, h);
  const DiscreteForm form = assemble_dirichlet(m, zero_field(m));
  const std::vector<double> eigs = oracle::dense_spectrum(form.A);
  const std::vector<double> expect = oracle::dirichlet_row_spectrum(k, h);
  REQUIRE(eigs.size() == expect.size());
  for (std::size_t j = 0; j < eigs.size(); ++j)
    CHECK(eigs[j] == doctest::Approx(expect[j]).epsilon(1e-10));
}

TEST_CASE("dirichlet diagonal is uniformly 4/h^2 plus the potential") {
  Rng rng(9);
  const GridMask m = oracle::random_mask(rng, 9, 9);
  const PotentialField V = oracle::random_potential(rng, m, 2.0);
  const DiscreteForm form = assemble_dirichlet(m, V);
  const double h2 = m.h() * m.h();
  for (Eigen::Index i = 0; i < form.A.rows(); ++i)
    CHECK(form.A.coeff(i, i) == 4.0 / h2 + V.values[static_cast<std::size_t>(i)]);
}

TEST_CASE("neumann diagonal equals the included-neighbor degree") {
  // Dyadic h keeps the comparison exact (1/h^2 = 64, an integer).
  std::vector<std::uint8_t> cells(8 * 10, 1);
  cells[2 * 10 + 3] = 0;
  cells[5 * 10 + 7] = 0;
  cells[79] = 0;
  const GridMask m = GridMask::from_cells(0.125, 0.0, 0.0, 8, 10, cells);
  const DiscreteForm form = assemble_neumann(m, zero_field(m));
  const auto included = m.included_cells();
  const double inv_h2 = 64.0;
  for (std::size_t i = 0; i < included.size(); ++i) {
    const auto [r, c] = included[i];
    int deg = 0;
    if (r > 0 && m.included(r - 1, c)) ++deg;
    if (r + 1 < m.rows() && m.included(r + 1, c)) ++deg;
    if (c > 0 && m.included(r, c - 1)) ++deg;
    if (c + 1 < m.cols() && m.included(r, c + 1)) ++deg;
    CHECK(form.A.coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) ==
          deg * inv_h2);
  }
}

TEST_CASE("potential sampling clips positive parts and records it") {
  const GridMask m = rasterize(make_rectangle(1.0, 1.0), 0.125);
  const PotentialField V = sample_potential(m, HalfPlanePotential{0.5, 1.5});
  std::int64_t negative = 0;
  for (double v : V.values) {
    CHECK(v <= 0.0);
    if (v < 0.0) ++negative;
  }
  CHECK(negative > 0);
  CHECK(negative < m.cell_count());
  CHECK(V.clipped == 0);  // the half-plane well is nonpositive by construction

  // A callable that pokes above zero gets clipped, and the clip is counted.
  const PotentialField W =
      sample_potential(m, [](double x, double) { return x - 0.5; }, "tilted");
  CHECK(W.clipped > 0);
  for (double w : W.values) CHECK(w <= 0.0);
}

TEST_CASE("non-finite potential samples are rejected") {
  const GridMask m = rasterize(make_rectangle(1.0, 1.0), 0.25);
  CHECK_THROWS_AS((void)sample_potential(
                      m,
                      [](double x, double) {
                        return x > 0.5 ? std::numeric_limits<double>::quiet_NaN()
                                       : -1.0;
                      },
                      "nan-patch"),
                  Error);
  try {
    (void)sample_potential(m, [](double, double) { return -1.0 / 0.0; },
                           "bottomless");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::singular_sample);
  }
}

TEST_CASE("distance-power wells evaluate on the distance field") {
  const double h = 0.125;
  const GridMask m = rasterize(make_rectangle(1.0, 1.0), h);
  const double alpha = 0.6;
  const PotentialField V = sample_potential(m, DistancePowerPotential{alpha, 1.0});
  const auto cells = m.included_cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto [r, c] = cells[i];
    const int steps = std::min(std::min(r + 1, c + 1), std::min(m.rows() - r, m.cols() - c));
    CHECK(V.values[i] == doctest::Approx(-std::pow(h * steps, -alpha)).epsilon(1e-13));
  }
}

TEST_CASE("bump wells are compactly supported") {
  const GridMask m = rasterize(make_rectangle(1.0, 1.0), 1.0 / 32.0);
  const BumpPotential spec{0.5, 0.5, 0.2, 3.0};
  const PotentialField V = sample_potential(m, spec);
  const auto cells = m.included_cells();
  std::int64_t inside = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto [r, c] = cells[i];
    const double x = m.center_x(c), y = m.center_y(r);
    const double rr = std::hypot(x - 0.5, y - 0.5);
    if (rr >= 0.2) {
      CHECK(V.values[i] == 0.0);
    } else {
      CHECK(V.values[i] <= 0.0);
      if (V.values[i] < 0.0) ++inside;
    }
  }
  CHECK(inside > 0);
  // Depth is attained at the center cell.
  double vmin = 0.0;
  for (double v : V.values) vmin = std::min(vmin, v);
  CHECK(vmin == doctest::Approx(-3.0).epsilon(0.05));
}

TEST_CASE("assembly validates the potential") {
  const GridMask m = rasterize(make_rectangle(1.0, 1.0), 0.25);
  PotentialField bad;
  bad.values.assign(static_cast<std::size_t>(m.cell_count()) - 1, -1.0);
  CHECK_THROWS_AS((void)assemble_neumann(m, bad), Error);
  PotentialField pos;
  pos.values.assign(static_cast<std::size_t>(m.cell_count()), 0.5);
  CHECK_THROWS_AS((void)assemble_dirichlet(m, pos), Error);
}

TEST_CASE("matrix market export matches a hand-written golden") {
  // A 1 x 2 Neumann row at h = 1/2: off-diagonal -4, diagonals 4.
  const GridMask m = row_mask(2, 0.5);
  const DiscreteForm form = assemble_neumann(m, zero_field(m));
  std::ostringstream os;
  write_matrix_market(form.A, os);
  CHECK(os.str() ==
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "2 2 3\n"
        "1 1 4\n"
        "2 1 -4\n"
        "2 2 4\n");
}

TEST_SUITE_END();
