#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "weylab/common.hpp"
#include "weylab/geometry.hpp"

using namespace weylab;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("holder profile evaluates its lacunary cosine series") {
  const HolderFunction f(0.7, 0.3, 2, 5, 1.0);
  CHECK(f.gamma() == 0.7);
  CHECK(f.amplitude() == 0.3);
  CHECK(f.base() == 2);
  CHECK(f.terms() == 5);
  CHECK(f.offset() == 1.0);
  for (double x : {0.0, 0.1, 0.37, 0.5, 0.93}) {
    double expect = 1.0;
    for (int k = 0; k <= 5; ++k) {
      const double bk = std::pow(2.0, k);
      expect += 0.3 * std::pow(bk, -0.7) * std::cos(bk * std::numbers::pi * x);
    }
    CHECK(f(x) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("holder constant certifies sampled increments") {
  const HolderFunction f(0.6, 0.4, 2, 12, 0.8);
  const double C = f.holder_constant();
  CHECK(C > 0.0);
  Rng rng(7);
  double max_dev = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double x = rng.uniform(0.0, 1.0);
    const double y = rng.uniform(0.0, 1.0);
    if (x == y) continue;
    const double lhs = std::abs(f(x) - f(y));
    CHECK(lhs <= C * std::pow(std::abs(x - y), 0.6) + 1e-12);
    max_dev = std::max(max_dev, std::abs(f(x) - 0.8));
  }
  CHECK(f.sup_deviation() >= max_dev - 1e-12);
  CHECK(f.sup_deviation() <= 0.4 * 12 + 1e-12);
}

TEST_CASE("default term count reaches the grid scale") {
  for (double h : {0.1, 0.01, 1.0 / 256.0}) {
    const int K = HolderFunction::default_terms(2, h);
    CHECK(std::pow(2.0, -(K - 2)) <= h);
    if (K > 2) CHECK(std::pow(2.0, -(K - 3)) > h);
  }
  CHECK_THROWS_AS((void)HolderFunction::default_terms(1, 0.1), Error);
  CHECK_THROWS_AS((void)HolderFunction::default_terms(2, 0.0), Error);
}

TEST_CASE("invalid holder parameters are rejected") {
  CHECK_THROWS_AS(HolderFunction(0.0, 0.3, 2, 5, 1.0), Error);
  CHECK_THROWS_AS(HolderFunction(1.1, 0.3, 2, 5, 1.0), Error);
  CHECK_THROWS_AS(HolderFunction(0.5, -0.1, 2, 5, 1.0), Error);
  CHECK_THROWS_AS(HolderFunction(0.5, 0.3, 1, 5, 1.0), Error);
  CHECK_THROWS_AS(HolderFunction(0.5, 0.3, 2, 61, 1.0), Error);
  // Lipschitz top end, a single-term series, and amplitude zero are all legal.
  CHECK_NOTHROW(HolderFunction(1.0, 0.3, 2, 5, 1.0));
  const double single = 2.5 + 0.3 * std::cos(std::numbers::pi * 0.3);
  CHECK(HolderFunction(0.5, 0.3, 2, 0, 2.5)(0.3) ==
        doctest::Approx(single).epsilon(1e-15));
  CHECK(HolderFunction(0.5, 0.0, 2, 5, 2.5)(0.3) == 2.5);
}

TEST_CASE("axis-aligned rectangle rasterizes exactly") {
  const Domain2D d = make_rectangle(1.0, 1.0);
  const GridMask m = rasterize(d, 0.125);
  CHECK(m.rows() == 8);
  CHECK(m.cols() == 8);
  CHECK(m.cell_count() == 64);
  CHECK(m.connected());
  const MeasureResult meas = measure(m);
  CHECK(meas.area == 1.0);       // 64 * (1/8)^2 with exact dyadic h
  CHECK(meas.perimeter == 4.0);  // 4 sides * 8 edges * 1/8
}

TEST_CASE("disk area converges at first order") {
  const Domain2D d = make_disk(1.0);
  const double a64 = measure(rasterize(d, 1.0 / 64.0)).area;
  const double a128 = measure(rasterize(d, 1.0 / 128.0)).area;
  CHECK(std::abs(a64 - std::numbers::pi) < 0.02 * std::numbers::pi);
  CHECK(std::abs(a128 - std::numbers::pi) < std::abs(a64 - std::numbers::pi));
}

TEST_CASE("disk perimeter carries the manhattan bias") {
  // Counting exposed cell edges measures the boundary in the l^1 metric, so a
  // disk reports about 8r instead of 2*pi*r.  The bias is structural; pin it
  // so nobody "fixes" area by breaking perimeter or vice versa.
  const double p = measure(rasterize(make_disk(1.0), 1.0 / 128.0)).perimeter;
  CHECK(p == doctest::Approx(8.0).epsilon(0.02));
}

TEST_CASE("ordinals and included cells are inverse maps") {
  Rng rng(11);
  const GridMask m = oracle::random_mask(rng, 17, 23);
  const auto cells = m.included_cells();
  const auto ord = m.ordinal_map();
  CHECK(cells.size() == static_cast<std::size_t>(m.cell_count()));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto [r, c] = cells[i];
    CHECK(m.included(r, c));
    CHECK(ord[static_cast<std::size_t>(r) * m.cols() + c] == static_cast<std::int64_t>(i));
  }
  std::int64_t excluded_ord_count = 0;
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (!m.included(r, c) && ord[static_cast<std::size_t>(r) * m.cols() + c] == -1)
        ++excluded_ord_count;
  CHECK(excluded_ord_count == m.total_cells() - m.cell_count());
}

TEST_CASE("raster policy controls disconnection") {
  // At h = 0.1 the second passage of the three-room comb is thinner than one
  // cell, so the third room separates from the rest.
  const Domain2D d = make_rooms_and_passages(3);
  CHECK_THROWS_AS((void)rasterize(d, 0.1), Error);
  try {
    (void)rasterize(d, 0.1);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::resolution_too_coarse);
  }
  const GridMask loose = rasterize(d, 0.1, RasterPolicy::AllowDisconnected);
  CHECK_FALSE(loose.connected());
  CHECK(loose.component_count() == 2);
  const GridMask fine = rasterize(d, 0.02);
  CHECK(fine.connected());
}

TEST_CASE("mask binary round trip and pgm header") {
  Rng rng(3);
  const GridMask m = oracle::random_mask(rng, 9, 14);
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  m.write_binary(buf);
  buf.seekg(0);
  const GridMask back = GridMask::read_binary(buf);
  CHECK(back.rows() == m.rows());
  CHECK(back.cols() == m.cols());
  CHECK(back.h() == m.h());
  CHECK(back.origin_x() == m.origin_x());
  CHECK(back.origin_y() == m.origin_y());
  CHECK(back.cell_count() == m.cell_count());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) CHECK(back.included(r, c) == m.included(r, c));

  std::ostringstream pgm;
  m.write_pgm(pgm);
  CHECK(pgm.str().rfind("P5", 0) == 0);

  // A truncated stream is rejected.
  std::stringstream cut(std::ios::in | std::ios::out | std::ios::binary);
  m.write_binary(cut);
  std::string raw = cut.str();
  raw.resize(raw.size() / 2);
  std::istringstream broken(raw, std::ios::binary);
  CHECK_THROWS_AS((void)GridMask::read_binary(broken), Error);
}

TEST_CASE("distance field is exact on a square") {
  const GridMask m = rasterize(make_rectangle(1.0, 1.0), 0.125);
  const std::vector<double> dist = distance_to_boundary(m);
  const auto cells = m.included_cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto [r, c] = cells[i];
    const int steps = std::min(std::min(r + 1, c + 1), std::min(m.rows() - r, m.cols() - c));
    CHECK(dist[i] == doctest::Approx(0.125 * steps).epsilon(1e-14));
  }
}

TEST_CASE("oscillation table tracks dense samples to the sampling modulus") {
  const HolderFunction f(0.7, 0.35, 2, 8, 1.0);
  const int levels = 10;
  const OscillationTable table(f, 0.0, 1.0, levels);
  CHECK(table.levels() == levels);
  CHECK(table.lo() == 0.0);
  CHECK(table.hi() == 1.0);
  // The table samples the finest blocks; its bounds can differ from a denser
  // independent scan by at most the Hoelder modulus over one finest block.
  const double finest_w = std::pow(0.5, levels);
  const double slack = f.holder_constant() * std::pow(finest_w, f.gamma());
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int level = static_cast<int>(rng.uniform_int(0, levels - 1));
    const std::int64_t blocks = std::int64_t{1} << level;
    const std::int64_t j = rng.uniform_int(0, blocks - 1);
    const double x0 = static_cast<double>(j) / static_cast<double>(blocks);
    const double x1 = static_cast<double>(j + 1) / static_cast<double>(blocks);
    double smin = f(x0), smax = f(x0);
    for (int i = 1; i <= 200; ++i) {
      const double x = x0 + (x1 - x0) * i / 200.0;
      smin = std::min(smin, f(x));
      smax = std::max(smax, f(x));
    }
    CHECK(table.block_min(level, j) <= smin + slack);
    CHECK(table.block_min(level, j) >= smin - slack);
    CHECK(table.block_max(level, j) >= smax - slack);
    CHECK(table.block_max(level, j) <= smax + slack);
    CHECK(table.block_osc(level, j) ==
          doctest::Approx(table.block_max(level, j) - table.block_min(level, j))
              .epsilon(1e-15));
  }
}

TEST_CASE("oscillation bounds nest across levels") {
  const HolderFunction f(0.6, 0.3, 2, 8, 1.0);
  const OscillationTable table(f, 0.0, 1.0, 8);
  for (int level = 0; level + 1 < 8; ++level) {
    const std::int64_t blocks = std::int64_t{1} << level;
    for (std::int64_t j = 0; j < blocks; ++j) {
      const double child_max =
          std::max(table.block_max(level + 1, 2 * j), table.block_max(level + 1, 2 * j + 1));
      const double child_min =
          std::min(table.block_min(level + 1, 2 * j), table.block_min(level + 1, 2 * j + 1));
      CHECK(table.block_max(level, j) >= child_max - 1e-15);
      CHECK(table.block_min(level, j) <= child_min + 1e-15);
    }
  }
}

TEST_CASE("box counting requires a usable scale ladder") {
  const HolderFunction f(0.7, 0.3, 2, 10, 1.0);
  std::vector<double> good;
  for (int k = 3; k <= 10; ++k) good.push_back(std::pow(2.0, -k));
  // Too few scales, non-dyadic scales, and a ladder narrower than two decades
  // are all rejected; duplicates too.
  CHECK_THROWS_AS((void)box_counting_dimension(f, 0.0, 1.0, {0.25, 0.125, 0.0625}), Error);
  CHECK_THROWS_AS((void)box_counting_dimension(f, 0.0, 1.0, {0.3, 0.15, 0.075, 0.0375}), Error);
  CHECK_THROWS_AS(
      (void)box_counting_dimension(f, 0.0, 1.0, {0.25, 0.125, 0.0625, 0.03125}), Error);
  auto dup = good;
  dup.back() = good.front();
  CHECK_THROWS_AS((void)box_counting_dimension(f, 0.0, 1.0, dup), Error);
  // A constant profile is a horizontal segment: dimension exactly 1.
  const HolderFunction flat(0.7, 0.0, 2, 4, 1.0);
  CHECK(box_counting_dimension(flat, 0.0, 1.0, good).estimate == doctest::Approx(1.0));
}

TEST_CASE("box counting tracks the graph roughness") {
  std::vector<double> scales;
  for (int k = 3; k <= 11; ++k) scales.push_back(std::pow(2.0, -k));
  {
    const HolderFunction f(0.5, 0.4, 2, 16, 1.0);
    const DimensionFit fit = box_counting_dimension(f, 0.0, 1.0, scales);
    CHECK(fit.scales.size() == scales.size());
    CHECK(fit.counts.size() == scales.size());
    CHECK(fit.estimate > 1.3);
    CHECK(fit.estimate < 1.65);
  }
  {
    const HolderFunction f(0.9, 0.4, 2, 16, 1.0);
    const DimensionFit fit = box_counting_dimension(f, 0.0, 1.0, scales);
    CHECK(fit.estimate > 0.95);
    CHECK(fit.estimate < 1.25);
  }
}

TEST_CASE("rooms and passages follow the explicit construction") {
  const auto pieces = rooms_and_passages_pieces(5);
  CHECK(pieces.size() == 5);
  for (int i = 1; i <= 5; ++i) {
    const RoomSpec& p = pieces[static_cast<std::size_t>(i - 1)];
    const double xi = rooms_room_start(i);
    CHECK(xi == doctest::Approx(8.0 - 10.0 * std::pow(0.8, i)).epsilon(1e-14));
    CHECK(p.room.x0 == doctest::Approx(xi).epsilon(1e-14));
    CHECK(p.room.width() == doctest::Approx(std::pow(0.8, i)).epsilon(1e-13));
    CHECK(p.room.height() == doctest::Approx(2.0 / i).epsilon(1e-13));
    if (i < 5) {
      REQUIRE(p.passage.has_value());
      const double half = rooms_passage_half_height(i);
      CHECK(half == doctest::Approx(std::pow(0.8, 2 * i) / (5.0 * i)).epsilon(1e-13));
      CHECK(p.passage->height() == doctest::Approx(2.0 * half).epsilon(1e-13));
      // The passage bridges the gap between room i and room i+1.
      CHECK(p.passage->x0 == doctest::Approx(p.room.x1).epsilon(1e-13));
      CHECK(p.passage->x1 ==
            doctest::Approx(pieces[static_cast<std::size_t>(i)].room.x0).epsilon(1e-13));
    } else {
      CHECK_FALSE(p.passage.has_value());
    }
  }
}

TEST_CASE("rooms membership and extrapolation flag") {
  const Domain2D d = make_rooms_and_passages(3);
  const auto pieces = rooms_and_passages_pieces(3);
  const Box2& r1 = pieces[0].room;
  CHECK(d.contains(0.5 * (r1.x0 + r1.x1), 0.0));
  CHECK_FALSE(d.contains(0.5 * (r1.x0 + r1.x1), 1.5));
  REQUIRE(pieces[0].passage.has_value());
  const Box2& p1 = *pieces[0].passage;
  const double px = 0.5 * (p1.x0 + p1.x1);
  CHECK(d.contains(px, 0.0));
  CHECK_FALSE(d.contains(px, p1.y1 + 0.01));
  const Box2 bb = d.bounding_box();
  CHECK(bb.y0 == doctest::Approx(-1.0));
  CHECK(bb.y1 == doctest::Approx(1.0));

  CHECK_FALSE(std::get<RoomsAndPassages>(make_rooms_and_passages(100).shape()).extrapolated);
  CHECK(std::get<RoomsAndPassages>(make_rooms_and_passages(200).shape()).extrapolated);
  CHECK_THROWS_AS((void)make_rooms_and_passages(0), Error);
}

TEST_CASE("graph domains keep the profile above the floor") {
  const HolderFunction f(0.8, 0.25, 2, 8, 1.0);
  const Domain2D d = make_graph_domain(f, 0.0, 1.0, 0.0);
  const double y = f(0.5);
  CHECK(d.contains(0.5, 0.5 * y));
  CHECK_FALSE(d.contains(0.5, y + 0.05));
  CHECK_FALSE(d.contains(-0.1, 0.1));
  // A profile dipping to the floor is rejected outright.
  const HolderFunction bad(0.8, 0.5, 2, 8, 0.1);
  CHECK_THROWS_AS((void)make_graph_domain(bad, 0.0, 1.0, 0.0), Error);
}

TEST_SUITE_END();
