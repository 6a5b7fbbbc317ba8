#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "weylab/common.hpp"

namespace weylab {

// Truncated Weierstrass-type boundary profile
//
//   f(x) = offset + amplitude * sum_{k=0}^{terms} base^(-gamma k) cos(base^k pi x)
//
// For gamma in (0,1) and enough terms this is the standard example of a
// function that is gamma-Hoelder but nowhere better; gamma = 1 with one term
// degenerates to a smooth cosine.  holder_constant() returns a certified
// constant C with |f(x)-f(y)| <= C |x-y|^gamma for all x, y (proof: split the
// sum at the frequency matched to |x-y| and bound each part by min(2, pi
// base^k |x-y|) * base^(-gamma k); both parts are <= amplitude*(pi+2) per
// retained term after the worst-case rebalance, giving C = amplitude *
// (pi+2) * (terms+1)).
class HolderFunction {
 public:
  HolderFunction() = default;
  HolderFunction(double gamma, double amplitude, int base, int terms, double offset);

  double operator()(double x) const;

  double gamma() const { return gamma_; }
  double amplitude() const { return amplitude_; }
  int base() const { return base_; }
  int terms() const { return terms_; }
  double offset() const { return offset_; }

  // Certified Hoelder constant (see above); exact suprema are smaller.
  double holder_constant() const;
  // Geometric-series bound on |f(x) - offset|.
  double sup_deviation() const;

  // Enough terms that the first omitted frequency is invisible at grid
  // spacing h: smallest K with base^-K <= h, plus two guard terms.
  static int default_terms(int base, double h);

 private:
  double gamma_ = 1.0;
  double amplitude_ = 0.0;
  int base_ = 2;
  int terms_ = 0;
  double offset_ = 0.0;
};

struct Box2 {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool contains(double x, double y) const {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
  }
};

// ---------------------------------------------------------------------------
// Domain shapes

struct Rectangle {
  double a = 1.0, b = 1.0;  // (0,a) x (0,b)
};

struct Disk {
  double r = 1.0;  // centred at the origin
};

// { (x,y) : base_lo < x < base_hi, floor_y < y < f(x) }
struct GraphDomain {
  HolderFunction f;
  double base_lo = 0.0, base_hi = 1.0;
  double floor_y = 0.0;
};

// Classical rooms-and-passages comb: room i is a square-ish box of width
// (4/5)^i and half-height 1/i, passage i connects it to room i+1 with
// half-height (4/5)^(2i) / (5i).  The trailing passage of the last room is
// omitted.  Total horizontal extent tends to 8 as n_rooms grows.
struct RoomsAndPassages {
  int n_rooms = 1;
  bool extrapolated = false;  // set when n_rooms exceeds the vetted range
};

// One horizontal segment of the rooms-and-passages comb, used both for
// membership tests and for resolution guards.
struct RoomSpec {
  Box2 room;
  std::optional<Box2> passage;  // absent for the last room
};

class Domain2D {
 public:
  using Variant = std::variant<Rectangle, Disk, GraphDomain, RoomsAndPassages>;

  explicit Domain2D(Variant shape);

  bool contains(double x, double y) const;
  Box2 bounding_box() const;
  const Variant& shape() const { return shape_; }
  std::string type_name() const;

 private:
  Variant shape_;
  Box2 bbox_;
  // Rooms-and-passages acceleration: segments sorted by x, located by
  // binary search (the comb is x-contiguous).
  struct Segment {
    double x0, x1, half_height;
  };
  std::vector<Segment> segments_;
};

Domain2D make_rectangle(double a, double b);
Domain2D make_disk(double r);
Domain2D make_graph_domain(const HolderFunction& f, double base_lo, double base_hi,
                           double floor_y);
Domain2D make_rooms_and_passages(int n_rooms);

// Exact piece geometry of the comb; shared by construction, tests and the
// resolution guard in the rooms probe.
std::vector<RoomSpec> rooms_and_passages_pieces(int n_rooms);
double rooms_room_start(int i);          // x_i, 1-based
double rooms_passage_half_height(int i); // passage after room i, 1-based

// ---------------------------------------------------------------------------
// Rasterization

enum class RasterPolicy {
  RequireConnected,   // disconnected raster is an error (default)
  AllowDisconnected,  // keep all included cells (area measurements etc.)
};

// Axis-aligned cell grid anchored at the lower-left corner of the domain's
// bounding box.  Cell (r, c) spans [ox + c h, ox + (c+1) h] x [oy + r h,
// oy + (r+1) h]; inclusion is decided at the cell centre.
class GridMask {
 public:
  GridMask() = default;
  static GridMask from_cells(double h, double origin_x, double origin_y, int rows,
                             int cols, std::vector<std::uint8_t> cells);

  double h() const { return h_; }
  double origin_x() const { return ox_; }
  double origin_y() const { return oy_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  bool included(int r, int c) const {
    return cells_[static_cast<std::size_t>(r) * cols_ + c] != 0;
  }
  std::int64_t cell_count() const { return n_included_; }
  std::int64_t total_cells() const {
    return static_cast<std::int64_t>(rows_) * cols_;
  }

  double center_x(int c) const { return ox_ + (c + 0.5) * h_; }
  double center_y(int r) const { return oy_ + (r + 0.5) * h_; }

  // 4-neighbour connectivity of the included cells (empty mask counts as
  // connected).  BFS; linear in the grid size.
  bool connected() const;
  int component_count() const;

  // Included cells in row-major order; ordinal(r,c) inverts the enumeration
  // (-1 for excluded cells).  Materialised on demand.
  std::vector<std::pair<int, int>> included_cells() const;
  std::vector<std::int64_t> ordinal_map() const;

  void write_binary(std::ostream& os) const;
  static GridMask read_binary(std::istream& is);
  void write_pgm(std::ostream& os) const;

 private:
  double h_ = 1.0, ox_ = 0.0, oy_ = 0.0;
  int rows_ = 0, cols_ = 0;
  std::vector<std::uint8_t> cells_;
  std::int64_t n_included_ = 0;
};

GridMask rasterize(const Domain2D& domain, double h,
                   RasterPolicy policy = RasterPolicy::RequireConnected);

struct MeasureResult {
  double area;       // included cells * h^2
  double perimeter;  // included<->excluded interface length (Manhattan bias!)
};

MeasureResult measure(const GridMask& m);

// Distance from each included cell centre to the nearest excluded cell
// centre, with a virtual excluded ring one cell outside the grid.  Exact
// Euclidean (Felzenszwalb-Huttenlocher two-pass transform); returned in
// included-cell ordinal order.  A cell adjacent to the boundary gets h.
std::vector<double> distance_to_boundary(const GridMask& m);

// ---------------------------------------------------------------------------
// Oscillation bookkeeping for profiles: min/max of f over dyadic blocks of
// [lo, hi], assembled bottom-up from a dense sampling of the finest level.
// Queries combine whole blocks, so osc over any dyadic interval costs O(1).
class OscillationTable {
 public:
  OscillationTable(const HolderFunction& f, double lo, double hi, int levels);

  int levels() const { return levels_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  // Block j (0-based) at depth l covers lo + (hi-lo) * [j, j+1] / 2^l.
  double block_min(int level, std::int64_t j) const;
  double block_max(int level, std::int64_t j) const;
  double block_osc(int level, std::int64_t j) const {
    return block_max(level, j) - block_min(level, j);
  }

 private:
  double lo_, hi_;
  int levels_;
  // level l stored as slabs_[l], 2^l entries of (min, max)
  std::vector<std::vector<std::pair<float, float>>> slabs_;
};

struct DimensionFit {
  double estimate;   // least-squares slope of log N(eps) vs log 1/eps
  double residual;   // RMS residual of the fit
  std::vector<double> scales;
  std::vector<std::int64_t> counts;
};

// Box-counting dimension of the graph of f over [lo, hi]: for each scale
// eps = (hi-lo)/2^l, counts eps-boxes meeting the graph column-by-column
// (ceil(osc/eps) + 1 per column) and fits the log-log slope.  Scales must be
// dyadic fractions of the base interval, at least 4 of them spanning two
// decades.
DimensionFit box_counting_dimension(const HolderFunction& f, double lo, double hi,
                                    const std::vector<double>& scales);

}  // namespace weylab
