#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "weylab/counting.hpp"
#include "weylab/forms.hpp"
#include "weylab/geometry.hpp"
#include "weylab/semiclassics.hpp"

namespace weylab {

enum class BoxTag { Bulk, BoundaryStack, BoundaryCap };

struct CoverBox {
  Box2 box;
  BoxTag tag;
};

struct BaseInterval {
  double x0 = 0, x1 = 0;
  double f_min = 0, f_max = 0;
  double osc() const { return f_max - f_min; }
};

// One side of the covering: either the bulk lattice or the boundary stacks.
struct PartialCover {
  std::vector<CoverBox> boxes;
  double lambda = 0.0;
  double ell = 0.0;    // bulk lattice side (0 for boundary covers)
  double delta = 0.0;  // boundary box height (0 for bulk covers)
  std::int64_t bulk_count = 0;
  std::int64_t stack_count = 0;
  std::int64_t cap_count = 0;
  std::vector<BaseInterval> base_partition;      // boundary covers only
  std::optional<HolderFunction> profile;         // boundary covers only
  double floor_y = 0.0;
};

// Cheap variant for lambda sweeps: partition statistics without
// materializing boxes.
struct BoundaryCoverStats {
  std::int64_t intervals = 0;
  std::int64_t stacks = 0;
  std::int64_t caps = 0;
  double delta = 0.0;
  double min_interval_len = 0.0;
};

// Bulk lattice: squares of side ell = kappa_bulk/sqrt(lambda) anchored at the
// mask origin.  A square joins the cover when all cell centers inside it are
// included, or when it contains a cell at distance > ell from the boundary
// (so everything deeper than ell is covered).
PartialCover bulk_cover(const GridMask& m, double lambda, double kappa_bulk = 1.0);

// Boundary cover under a graph profile: greedy maximal dyadic partition of
// [base_lo, base_hi] into intervals with osc(f) <= delta = kappa_bdry/
// sqrt(lambda), then per interval height-delta cuboids stacked from the floor
// to the profile minimum, topped by one cap covering the oscillation range.
// The overload taking an OscillationTable reuses it across a lambda sweep.
PartialCover boundary_cover(const HolderFunction& f, double base_lo, double base_hi,
                            double floor_y, double lambda, double kappa_bdry = 1.0);
PartialCover boundary_cover(const HolderFunction& f, double base_lo, double base_hi,
                            double floor_y, double lambda, double kappa_bdry,
                            const OscillationTable& table);

BoundaryCoverStats boundary_cover_stats(const HolderFunction& f, double base_lo,
                                        double base_hi, double floor_y, double lambda,
                                        double kappa_bdry = 1.0);
BoundaryCoverStats boundary_cover_stats(const HolderFunction& f, double base_lo,
                                        double base_hi, double floor_y, double lambda,
                                        double kappa_bdry, const OscillationTable& table);

struct OscillatoryCover {
  std::vector<CoverBox> boxes;
  double lambda = 0.0;
  double ell = 0.0;
  double delta = 0.0;
  int overlap_multiplicity = 0;  // max #boxes over the audited sample points
  std::vector<BaseInterval> base_partition;
  std::int64_t bulk_count = 0;
  std::int64_t stack_count = 0;
  std::int64_t cap_count = 0;
  // Generating profile, kept for weight policies that need boundary distances.
  std::optional<HolderFunction> profile;
  double floor_y = 0.0;
};

// Merge bulk + boundary parts, verify coverage of every included cell center,
// and audit the overlap multiplicity on random sample points (seeded).
OscillatoryCover assemble_cover(const GridMask& m, const PartialCover& bulk,
                                const PartialCover& boundary, int m_max = 8,
                                std::uint64_t seed = 1);

// Total box count: the heuristic upper-bound proxy under the
// one-eigenvalue-per-oscillatory-domain regime.
std::int64_t cover_count_bound(const OscillatoryCover& c);

struct BracketingResult {
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
  std::vector<std::int64_t> per_piece;
};

// Neumann bracketing: dropping the edges that cross piece boundaries only
// lowers the form, so N(whole) <= sum_j N(piece_j).  Pieces must share the
// mask's frame and partition its included cells exactly.
BracketingResult bracketing_check(const GridMask& m, const std::vector<GridMask>& pieces,
                                  double lambda, const PotentialField& V,
                                  const CountOptions& opts = {});

struct CapWeightPolicy {
  double a = 0.5;
  double b = 0.0;
  double scale = 1.0;  // A_j = scale * ell_j^a * (t_j + ell_j)^b
};

struct CapWeightReport {
  std::vector<double> a_values;
  std::int64_t cap_count = 0;
  double sum_pos = 0.0;            // sum A_j^s
  double sum_neg = 0.0;            // sum A_j^{-s'}
  double hoelder_bound = 0.0;      // >= cap_count, asserted by the caller
  double weighted_integral = 0.0;  // integral of w |V|^{p~} over the mask
  double c_fit = 0.0;              // max_j A_j^s / per-cap weighted integral
  double exponent_combo = 0.0;     // -1/(2s') + p~/s, should equal d/2
};

// Weights for the J3 caps: A_j = policy(ell_j, t_j) with ell_j the cap's base
// length and t_j the vertical distance from the cap center to the graph.
CapWeightReport assign_cap_weights(const OscillatoryCover& cover, const GridMask& m,
                                   const PotentialField& V, const WeightSpec& w,
                                   const ParameterSet& params, const CapWeightPolicy& policy);

struct CapProbeReport {
  std::int64_t probed = 0;
  std::int64_t empty = 0;       // caps with no cell centers at this h
  std::int64_t violations = 0;  // caps with count_below > 1
  std::vector<std::int64_t> counts;
};

// Empirical probe of the one-negative-eigenvalue property: for sampled caps,
// count_below(Neumann form on the cap's cells, lambda).  Violations are
// reported, never asserted — the kappa constants control them.
CapProbeReport probe_cap_eigencounts(const OscillatoryCover& cover, const GridMask& m,
                                     const PotentialField& V, double lambda,
                                     int max_caps = 32, std::uint64_t seed = 1);

// SVG overlay of the cover (and the profile, if present) for inspection.
void write_cover_svg(const OscillatoryCover& cover, std::ostream& os);

}  // namespace weylab
