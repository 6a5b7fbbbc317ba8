#include "weylab/covering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <unordered_set>

namespace weylab {

namespace {

double delta_for(double lambda, double kappa, const char* who) {
  require(std::isfinite(lambda) && lambda > 0.0, Errc::invalid_argument,
          std::string(who) + ": lambda must be positive");
  require(std::isfinite(kappa) && kappa > 0.0, Errc::invalid_argument,
          std::string(who) + ": kappa must be positive");
  return kappa / std::sqrt(lambda);
}

}  // namespace

// ---------------------------------------------------------------------------
// Bulk lattice

PartialCover bulk_cover(const GridMask& m, double lambda, double kappa_bulk) {
  const double ell = delta_for(lambda, kappa_bulk, "bulk_cover");
  if (ell < 2.0 * m.h()) {
    fail(Errc::resolution_too_coarse,
         "bulk_cover: lattice side " + std::to_string(ell) + " is below 2h = " +
             std::to_string(2.0 * m.h()));
  }

  const double ox = m.origin_x(), oy = m.origin_y();
  const auto nx = static_cast<std::int64_t>(std::floor((m.cols() * m.h()) / ell)) + 1;
  const auto ny = static_cast<std::int64_t>(std::floor((m.rows() * m.h()) / ell)) + 1;

  struct SquareState {
    bool has_center = false;
    bool has_excluded = false;
    bool has_deep = false;
  };
  std::vector<SquareState> state(static_cast<std::size_t>(nx * ny));
  auto square_of = [&](double x, double y) -> std::int64_t {
    auto i = static_cast<std::int64_t>(std::floor((x - ox) / ell));
    auto j = static_cast<std::int64_t>(std::floor((y - oy) / ell));
    i = std::clamp<std::int64_t>(i, 0, nx - 1);
    j = std::clamp<std::int64_t>(j, 0, ny - 1);
    return i * ny + j;
  };

  const std::vector<double> dist = distance_to_boundary(m);
  std::int64_t ord = 0;
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      auto& sq = state[static_cast<std::size_t>(square_of(m.center_x(c), m.center_y(r)))];
      if (!m.included(r, c)) {
        sq.has_excluded = true;
        continue;
      }
      sq.has_center = true;
      if (dist[static_cast<std::size_t>(ord)] > ell) sq.has_deep = true;
      ++ord;
    }
  }

  PartialCover cover;
  cover.lambda = lambda;
  cover.ell = ell;
  for (std::int64_t i = 0; i < nx; ++i) {
    for (std::int64_t j = 0; j < ny; ++j) {
      const auto& sq = state[static_cast<std::size_t>(i * ny + j)];
      // A square joins the cover when it is fully inside the raster, or when
      // it holds a deep cell (distance > ell) — the latter guarantees the
      // "everything deeper than ell" coverage postcondition.
      if (!sq.has_center) continue;
      if (sq.has_excluded && !sq.has_deep) continue;
      cover.boxes.push_back({Box2{ox + i * ell, oy + j * ell, ox + (i + 1) * ell,
                                  oy + (j + 1) * ell},
                             BoxTag::Bulk});
    }
  }
  cover.bulk_count = static_cast<std::int64_t>(cover.boxes.size());
  return cover;
}

// ---------------------------------------------------------------------------
// Boundary cover: greedy maximal dyadic partition + stacked cuboids

namespace {

// Maximal dyadic blocks with osc <= delta, left to right.  A block whose
// parent fails the oscillation test is maximal by construction.
std::vector<BaseInterval> dyadic_partition(const OscillationTable& table, double delta) {
  std::vector<BaseInterval> out;
  std::vector<std::pair<int, std::int64_t>> stack;
  stack.emplace_back(0, 0);
  const double lo = table.lo(), hi = table.hi();
  while (!stack.empty()) {
    auto [level, j] = stack.back();
    stack.pop_back();
    const double mn = table.block_min(level, j);
    const double mx = table.block_max(level, j);
    if (mx - mn <= delta) {
      const double w = (hi - lo) / static_cast<double>(std::int64_t(1) << level);
      out.push_back(BaseInterval{lo + w * static_cast<double>(j),
                                 lo + w * static_cast<double>(j + 1), mn, mx});
      continue;
    }
    if (level == table.levels()) {
      fail(Errc::resolution_too_coarse,
           "boundary_cover: oscillation still exceeds delta at the finest tabulated "
           "scale (level " +
               std::to_string(level) + ")");
    }
    stack.emplace_back(level + 1, 2 * j + 1);  // pushed first, popped second
    stack.emplace_back(level + 1, 2 * j);
  }
  return out;
}

int suggest_levels(const HolderFunction& f, double lo, double hi, double delta) {
  // Practical length at which the oscillation drops below delta; the factor 6
  // over-approximates the effective Hoelder constant of the truncated series.
  const double amp = std::max(f.amplitude(), 1e-300);
  const double frac = std::min(1.0, delta / (6.0 * amp));
  const double est_len = std::pow(frac, 1.0 / f.gamma()) * (hi - lo);
  const double levels = std::ceil(std::log2((hi - lo) / std::max(est_len, 1e-12)));
  return std::clamp(static_cast<int>(levels) + 2, 4, 22);
}

std::int64_t stack_count_for(double f_min, double floor_y, double delta) {
  if (f_min <= floor_y) return 0;
  return static_cast<std::int64_t>(std::ceil((f_min - floor_y) / delta));
}

}  // namespace

PartialCover boundary_cover(const HolderFunction& f, double base_lo, double base_hi,
                            double floor_y, double lambda, double kappa_bdry,
                            const OscillationTable& table) {
  const double delta = delta_for(lambda, kappa_bdry, "boundary_cover");
  require(base_hi > base_lo, Errc::invalid_argument, "boundary_cover: empty base interval");
  require(table.lo() == base_lo && table.hi() == base_hi, Errc::invalid_argument,
          "boundary_cover: oscillation table covers a different interval");

  PartialCover cover;
  cover.lambda = lambda;
  cover.delta = delta;
  cover.profile = f;
  cover.floor_y = floor_y;
  cover.base_partition = dyadic_partition(table, delta);
  for (const auto& iv : cover.base_partition) {
    const std::int64_t k = stack_count_for(iv.f_min, floor_y, delta);
    for (std::int64_t t = 0; t < k; ++t) {
      cover.boxes.push_back({Box2{iv.x0, floor_y + t * delta, iv.x1,
                                  floor_y + (t + 1) * delta},
                             BoxTag::BoundaryStack});
    }
    cover.boxes.push_back({Box2{iv.x0, iv.f_min, iv.x1, iv.f_min + delta},
                           BoxTag::BoundaryCap});
    cover.stack_count += k;
    cover.cap_count += 1;
  }
  return cover;
}

PartialCover boundary_cover(const HolderFunction& f, double base_lo, double base_hi,
                            double floor_y, double lambda, double kappa_bdry) {
  const double delta = delta_for(lambda, kappa_bdry, "boundary_cover");
  int levels = suggest_levels(f, base_lo, base_hi, delta);
  for (;;) {
    OscillationTable table(f, base_lo, base_hi, levels);
    try {
      return boundary_cover(f, base_lo, base_hi, floor_y, lambda, kappa_bdry, table);
    } catch (const Error& e) {
      if (e.code() != Errc::resolution_too_coarse || levels >= 22) throw;
      levels = std::min(levels + 3, 22);
    }
  }
}

BoundaryCoverStats boundary_cover_stats(const HolderFunction& f, double base_lo,
                                        double base_hi, double floor_y, double lambda,
                                        double kappa_bdry, const OscillationTable& table) {
  const double delta = delta_for(lambda, kappa_bdry, "boundary_cover_stats");
  require(table.lo() == base_lo && table.hi() == base_hi, Errc::invalid_argument,
          "boundary_cover_stats: oscillation table covers a different interval");
  (void)f;
  BoundaryCoverStats stats;
  stats.delta = delta;
  stats.min_interval_len = base_hi - base_lo;
  const auto partition = dyadic_partition(table, delta);
  for (const auto& iv : partition) {
    stats.intervals += 1;
    stats.caps += 1;
    stats.stacks += stack_count_for(iv.f_min, floor_y, delta);
    stats.min_interval_len = std::min(stats.min_interval_len, iv.x1 - iv.x0);
  }
  return stats;
}

BoundaryCoverStats boundary_cover_stats(const HolderFunction& f, double base_lo,
                                        double base_hi, double floor_y, double lambda,
                                        double kappa_bdry) {
  const double delta = delta_for(lambda, kappa_bdry, "boundary_cover_stats");
  int levels = suggest_levels(f, base_lo, base_hi, delta);
  for (;;) {
    OscillationTable table(f, base_lo, base_hi, levels);
    try {
      return boundary_cover_stats(f, base_lo, base_hi, floor_y, lambda, kappa_bdry, table);
    } catch (const Error& e) {
      if (e.code() != Errc::resolution_too_coarse || levels >= 22) throw;
      levels = std::min(levels + 3, 22);
    }
  }
}

// ---------------------------------------------------------------------------
// Assembly, coverage check, overlap audit

OscillatoryCover assemble_cover(const GridMask& m, const PartialCover& bulk,
                                const PartialCover& boundary, int m_max,
                                std::uint64_t seed) {
  require(m_max >= 1, Errc::invalid_configuration, "assemble_cover: m_max must be >= 1");
  require(bulk.delta == 0.0 && bulk.ell > 0.0, Errc::invalid_argument,
          "assemble_cover: first part must be a bulk cover");
  const bool has_boundary = !boundary.base_partition.empty();
  require(has_boundary == !boundary.boxes.empty(), Errc::invalid_argument,
          "assemble_cover: boundary part is internally inconsistent");
  if (has_boundary) {
    require(std::abs(bulk.lambda - boundary.lambda) <=
                1e-12 * std::max(std::abs(bulk.lambda), 1.0),
            Errc::invalid_argument, "assemble_cover: parts built for different lambda");
  }

  OscillatoryCover cover;
  cover.lambda = bulk.lambda;
  cover.ell = bulk.ell;
  cover.delta = boundary.delta;
  cover.base_partition = boundary.base_partition;
  cover.profile = boundary.profile;
  cover.floor_y = boundary.floor_y;
  cover.bulk_count = bulk.bulk_count;
  cover.stack_count = boundary.stack_count;
  cover.cap_count = boundary.cap_count;
  cover.boxes = bulk.boxes;
  cover.boxes.insert(cover.boxes.end(), boundary.boxes.begin(), boundary.boxes.end());

  // Fast membership structures.
  const double ox = m.origin_x(), oy = m.origin_y(), ell = bulk.ell;
  std::unordered_set<std::int64_t> bulk_squares;
  bulk_squares.reserve(bulk.boxes.size() * 2);
  const std::int64_t stride = 1 << 21;
  for (const auto& cb : bulk.boxes) {
    const auto i = static_cast<std::int64_t>(std::llround((cb.box.x0 - ox) / ell));
    const auto j = static_cast<std::int64_t>(std::llround((cb.box.y0 - oy) / ell));
    bulk_squares.insert(i * stride + j);
  }
  auto in_bulk = [&](double x, double y) {
    const auto i = static_cast<std::int64_t>(std::floor((x - ox) / ell));
    const auto j = static_cast<std::int64_t>(std::floor((y - oy) / ell));
    return bulk_squares.count(i * stride + j) != 0;
  };

  const auto& part = cover.base_partition;
  const double floor_y = has_boundary ? boundary.floor_y : oy;
  auto interval_of = [&](double x) -> std::int64_t {
    if (part.empty() || x < part.front().x0 || x >= part.back().x1) return -1;
    std::size_t lo = 0, hi = part.size();
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (part[mid].x0 <= x) lo = mid; else hi = mid;
    }
    return static_cast<std::int64_t>(lo);
  };
  auto boundary_column_top = [&](std::int64_t iv) {
    const double delta = boundary.delta;
    const std::int64_t k = stack_count_for(part[static_cast<std::size_t>(iv)].f_min,
                                           floor_y, delta);
    return std::max(floor_y + k * delta,
                    part[static_cast<std::size_t>(iv)].f_min + delta);
  };

  // Coverage: every included cell center must be inside some box.
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (!m.included(r, c)) continue;
      const double x = m.center_x(c), y = m.center_y(r);
      if (in_bulk(x, y)) continue;
      const std::int64_t iv = interval_of(x);
      if (iv >= 0 && y >= floor_y && y <= boundary_column_top(iv)) continue;
      fail(Errc::numerical_breakdown,
           "assemble_cover: cell (" + std::to_string(r) + ", " + std::to_string(c) +
               ") is not covered — kappa constants leave a gap");
    }
  }

  // Overlap audit on random points inside included cells.
  const auto cells = m.included_cells();
  Rng rng(seed);
  int worst = 0;
  const int samples = 100000;
  for (int t = 0; t < samples; ++t) {
    const auto& cell = cells[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(cells.size()) - 1))];
    const double x = m.origin_x() + (cell.second + rng.next_double()) * m.h();
    const double y = m.origin_y() + (cell.first + rng.next_double()) * m.h();
    int mult = in_bulk(x, y) ? 1 : 0;
    const std::int64_t iv = interval_of(x);
    if (iv >= 0) {
      const auto& bi = part[static_cast<std::size_t>(iv)];
      const double delta = boundary.delta;
      const std::int64_t k = stack_count_for(bi.f_min, floor_y, delta);
      if (y >= floor_y && k > 0) {
        const auto t0 = static_cast<std::int64_t>(std::floor((y - floor_y) / delta));
        if (t0 >= 0 && t0 < k) ++mult;
      }
      if (y >= bi.f_min && y <= bi.f_min + delta) ++mult;
    }
    worst = std::max(worst, mult);
  }
  if (worst > m_max) {
    fail(Errc::invalid_configuration,
         "assemble_cover: audited overlap multiplicity " + std::to_string(worst) +
             " exceeds m_max = " + std::to_string(m_max));
  }
  cover.overlap_multiplicity = worst;
  return cover;
}

std::int64_t cover_count_bound(const OscillatoryCover& c) {
  require(c.lambda > 0.0, Errc::invalid_argument, "cover_count_bound: invalid cover");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  std::int64_t total = 0;
  for (const auto& cb : c.boxes) {
    const double a = cb.box.width(), b = cb.box.height();
    // Neumann rectangle spectrum pi^2 (m^2/a^2 + n^2/b^2), m, n >= 0.
    for (std::int64_t mm = 0;; ++mm) {
      const double part = pi2 * double(mm) * double(mm) / (a * a);
      if (part >= c.lambda) break;
      for (std::int64_t nn = 0;; ++nn) {
        if (part + pi2 * double(nn) * double(nn) / (b * b) >= c.lambda) break;
        ++total;
      }
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Neumann bracketing

BracketingResult bracketing_check(const GridMask& m, const std::vector<GridMask>& pieces,
                                  double lambda, const PotentialField& V,
                                  const CountOptions& opts) {
  require(!pieces.empty(), Errc::invalid_partition, "bracketing_check: no pieces");
  require(V.values.size() == static_cast<std::size_t>(m.cell_count()), Errc::invalid_argument,
          "bracketing_check: potential does not match mask");
  for (const auto& p : pieces) {
    require(p.rows() == m.rows() && p.cols() == m.cols() && p.h() == m.h() &&
                p.origin_x() == m.origin_x() && p.origin_y() == m.origin_y(),
            Errc::invalid_partition, "bracketing_check: piece frame differs from mask");
  }
  std::vector<std::uint8_t> tally(static_cast<std::size_t>(m.total_cells()), 0);
  for (const auto& p : pieces) {
    for (int r = 0; r < m.rows(); ++r) {
      for (int c = 0; c < m.cols(); ++c) {
        if (!p.included(r, c)) continue;
        require(m.included(r, c), Errc::invalid_partition,
                "bracketing_check: piece includes a cell outside the mask");
        auto& t = tally[static_cast<std::size_t>(r) * m.cols() + c];
        require(t == 0, Errc::invalid_partition,
                "bracketing_check: cell covered by two pieces");
        t = 1;
      }
    }
  }
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      require(!m.included(r, c) || tally[static_cast<std::size_t>(r) * m.cols() + c] == 1,
              Errc::invalid_partition, "bracketing_check: cell not covered by any piece");

  BracketingResult res;
  res.lhs = count_below(assemble_neumann(m, V), lambda, opts).count;

  const auto mask_ord = m.ordinal_map();
  for (const auto& p : pieces) {
    PotentialField vp;
    vp.provenance = V.provenance + " | piece";
    vp.values.reserve(static_cast<std::size_t>(p.cell_count()));
    for (int r = 0; r < p.rows(); ++r)
      for (int c = 0; c < p.cols(); ++c)
        if (p.included(r, c))
          vp.values.push_back(
              V.values[static_cast<std::size_t>(
                  mask_ord[static_cast<std::size_t>(r) * m.cols() + c])]);
    const std::int64_t nj = count_below(assemble_neumann(p, vp), lambda, opts).count;
    res.per_piece.push_back(nj);
    res.rhs += nj;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Cap weights

CapWeightReport assign_cap_weights(const OscillatoryCover& cover, const GridMask& m,
                                   const PotentialField& V, const WeightSpec& w,
                                   const ParameterSet& params,
                                   const CapWeightPolicy& policy) {
  require(V.values.size() == static_cast<std::size_t>(m.cell_count()), Errc::invalid_argument,
          "assign_cap_weights: potential does not match mask");
  std::vector<const CoverBox*> caps;
  for (const auto& cb : cover.boxes)
    if (cb.tag == BoxTag::BoundaryCap) caps.push_back(&cb);
  require(!caps.empty(), Errc::invalid_argument, "assign_cap_weights: cover has no caps");
  require(cover.base_partition.empty() || caps.size() == cover.base_partition.size(),
          Errc::invalid_argument,
          "assign_cap_weights: caps do not line up with the base partition");

  CapWeightReport rep;
  rep.cap_count = static_cast<std::int64_t>(caps.size());
  rep.exponent_combo = -0.5 / params.s_prime + params.p_tilde / params.s;

  rep.a_values.reserve(caps.size());
  for (const auto* cb : caps) {
    const double ell = std::max(cb->box.width(), cb->box.height());
    double t = 0.0;
    if (cover.profile) {
      const double cx = 0.5 * (cb->box.x0 + cb->box.x1);
      const double cy = 0.5 * (cb->box.y0 + cb->box.y1);
      t = std::abs((*cover.profile)(cx) - cy);
    }
    const double a = policy.scale * std::pow(ell, policy.a) * std::pow(t + ell, policy.b);
    if (!(std::isfinite(a) && a > 0.0)) {
      fail(Errc::invalid_policy,
           "assign_cap_weights: policy produced A = " + std::to_string(a) +
               " for ell = " + std::to_string(ell) + ", t = " + std::to_string(t));
    }
    rep.a_values.push_back(a);
  }

  const auto hb = hoelder_sum_bound(rep.a_values, params.s);
  rep.hoelder_bound = hb.bound;
  require(hb.bound >= static_cast<double>(hb.count) * (1.0 - 1e-9),
          Errc::numerical_breakdown,
          "assign_cap_weights: Hoelder bound fell below the cap count");
  const double s_prime = params.s_prime;
  rep.sum_pos = 0.0;
  rep.sum_neg = 0.0;
  for (double a : rep.a_values) {
    rep.sum_pos += std::pow(a, params.s);
    rep.sum_neg += std::pow(a, -s_prime);
  }

  // Weighted integrals: whole-domain and per cap.
  const std::vector<double> weight = evaluate_weight(w, m);
  std::vector<double> cap_integral(caps.size(), 0.0);
  const auto& part = cover.base_partition;
  auto interval_of = [&](double x) -> std::int64_t {
    if (part.empty() || x < part.front().x0 || x >= part.back().x1) return -1;
    std::size_t lo = 0, hi = part.size();
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (part[mid].x0 <= x) lo = mid; else hi = mid;
    }
    return static_cast<std::int64_t>(lo);
  };
  const double cell_area = ipow(m.h(), params.d);
  std::int64_t ord = 0;
  double total_integral = 0.0;
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (!m.included(r, c)) continue;
      const double contrib =
          weight[static_cast<std::size_t>(ord)] *
          std::pow(std::abs(V.values[static_cast<std::size_t>(ord)]), params.p_tilde) *
          cell_area;
      total_integral += contrib;
      const double x = m.center_x(c), y = m.center_y(r);
      const std::int64_t iv = interval_of(x);
      if (iv >= 0 && static_cast<std::size_t>(iv) < caps.size()) {
        const auto& box = caps[static_cast<std::size_t>(iv)]->box;
        if (y >= box.y0 && y <= box.y1) cap_integral[static_cast<std::size_t>(iv)] += contrib;
      }
      ++ord;
    }
  }
  rep.weighted_integral = total_integral;
  rep.c_fit = 0.0;
  for (std::size_t j = 0; j < caps.size(); ++j) {
    if (cap_integral[j] > 0.0) {
      rep.c_fit = std::max(rep.c_fit,
                           std::pow(rep.a_values[j], params.s) / cap_integral[j]);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Cap eigenvalue probes

CapProbeReport probe_cap_eigencounts(const OscillatoryCover& cover, const GridMask& m,
                                     const PotentialField& V, double lambda, int max_caps,
                                     std::uint64_t seed) {
  require(V.values.size() == static_cast<std::size_t>(m.cell_count()), Errc::invalid_argument,
          "probe_cap_eigencounts: potential does not match mask");
  std::vector<const CoverBox*> caps;
  for (const auto& cb : cover.boxes)
    if (cb.tag == BoxTag::BoundaryCap) caps.push_back(&cb);

  Rng rng(seed);
  for (std::size_t i = caps.size(); i > 1; --i) {
    std::swap(caps[i - 1],
              caps[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
  }
  if (static_cast<int>(caps.size()) > max_caps) caps.resize(static_cast<std::size_t>(max_caps));

  const auto mask_ord = m.ordinal_map();
  CapProbeReport rep;
  for (const auto* cb : caps) {
    // Cells whose centers fall inside this cap, re-gridded tightly.
    int r0 = m.rows(), r1 = -1, c0 = m.cols(), c1 = -1;
    for (int r = 0; r < m.rows(); ++r) {
      const double y = m.center_y(r);
      if (y < cb->box.y0 || y > cb->box.y1) continue;
      for (int c = 0; c < m.cols(); ++c) {
        const double x = m.center_x(c);
        if (x < cb->box.x0 || x > cb->box.x1 || !m.included(r, c)) continue;
        r0 = std::min(r0, r);
        r1 = std::max(r1, r);
        c0 = std::min(c0, c);
        c1 = std::max(c1, c);
      }
    }
    ++rep.probed;
    if (r1 < r0) {
      ++rep.empty;
      rep.counts.push_back(0);
      continue;
    }
    const int rows = r1 - r0 + 1, cols = c1 - c0 + 1;
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(rows) * cols, 0);
    PotentialField vp;
    vp.provenance = V.provenance + " | cap";
    for (int r = r0; r <= r1; ++r) {
      const double y = m.center_y(r);
      for (int c = c0; c <= c1; ++c) {
        const double x = m.center_x(c);
        if (y < cb->box.y0 || y > cb->box.y1 || x < cb->box.x0 || x > cb->box.x1 ||
            !m.included(r, c))
          continue;
        cells[static_cast<std::size_t>(r - r0) * cols + (c - c0)] = 1;
      }
    }
    GridMask sub = GridMask::from_cells(m.h(), m.origin_x() + c0 * m.h(),
                                        m.origin_y() + r0 * m.h(), rows, cols,
                                        std::move(cells));
    for (int r = r0; r <= r1; ++r)
      for (int c = c0; c <= c1; ++c)
        if (sub.included(r - r0, c - c0))
          vp.values.push_back(V.values[static_cast<std::size_t>(
              mask_ord[static_cast<std::size_t>(r) * m.cols() + c])]);
    const std::int64_t count = count_below(assemble_neumann(sub, vp), lambda).count;
    rep.counts.push_back(count);
    if (count > 1) ++rep.violations;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// SVG overlay

void write_cover_svg(const OscillatoryCover& cover, std::ostream& os) {
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const auto& cb : cover.boxes) {
    x0 = std::min(x0, cb.box.x0);
    y0 = std::min(y0, cb.box.y0);
    x1 = std::max(x1, cb.box.x1);
    y1 = std::max(y1, cb.box.y1);
  }
  if (cover.boxes.empty()) {
    x0 = y0 = 0;
    x1 = y1 = 1;
  }
  const double pad = 0.03 * std::max(x1 - x0, y1 - y0);
  x0 -= pad; y0 -= pad; x1 += pad; y1 += pad;
  const double width = 900.0;
  const double scale = width / (x1 - x0);
  const double height = (y1 - y0) * scale;
  auto sx = [&](double x) { return (x - x0) * scale; };
  auto sy = [&](double y) { return height - (y - y0) * scale; };

  char buf[256];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& cb : cover.boxes) {
    const char* fill = cb.tag == BoxTag::Bulk          ? "#9ecae1"
                       : cb.tag == BoxTag::BoundaryStack ? "#a1d99b"
                                                         : "#fc9272";
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" "
                  "fill=\"%s\" fill-opacity=\"0.55\" stroke=\"#555\" stroke-width=\"0.3\"/>\n",
                  sx(cb.box.x0), sy(cb.box.y1), cb.box.width() * scale,
                  cb.box.height() * scale, fill);
    os << buf;
  }
  if (cover.profile) {
    os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
    const auto& part = cover.base_partition;
    const double lo = part.empty() ? x0 : part.front().x0;
    const double hi = part.empty() ? x1 : part.back().x1;
    for (int i = 0; i <= 512; ++i) {
      const double x = lo + (hi - lo) * i / 512.0;
      std::snprintf(buf, sizeof buf, "%.3f,%.3f ", sx(x), sy((*cover.profile)(x)));
      os << buf;
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
}

}  // namespace weylab
