#include "weylab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace weylab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

// ---------------------------------------------------------------------------
// HolderFunction

HolderFunction::HolderFunction(double gamma, double amplitude, int base, int terms,
                               double offset)
    : gamma_(gamma), amplitude_(amplitude), base_(base), terms_(terms), offset_(offset) {
  require(std::isfinite(gamma) && gamma > 0.0 && gamma <= 1.0, Errc::invalid_argument,
          "HolderFunction: gamma must lie in (0, 1]");
  require(std::isfinite(amplitude) && amplitude >= 0.0, Errc::invalid_argument,
          "HolderFunction: amplitude must be >= 0");
  require(base >= 2, Errc::invalid_argument, "HolderFunction: base must be >= 2");
  require(terms >= 0 && terms <= 60, Errc::invalid_argument,
          "HolderFunction: terms must lie in [0, 60]");
  require(std::isfinite(offset), Errc::invalid_argument,
          "HolderFunction: offset must be finite");
}

double HolderFunction::operator()(double x) const {
  double sum = 0.0;
  double freq = kPi;                          // base^k * pi
  double w = 1.0;                             // base^(-gamma k)
  const double wstep = std::pow(static_cast<double>(base_), -gamma_);
  for (int k = 0; k <= terms_; ++k) {
    sum += w * std::cos(freq * x);
    freq *= base_;
    w *= wstep;
  }
  return offset_ + amplitude_ * sum;
}

double HolderFunction::holder_constant() const {
  // |f(x)-f(y)| <= amplitude * sum_k b^(-gk) * min(2, pi b^k |x-y|)
  //             <= amplitude * (pi + 2) * (terms+1) * |x-y|^gamma,
  // since each term of the split sum is <= (pi or 2) after balancing at the
  // index k* with b^(-k*) ~ |x-y|.
  return amplitude_ * (kPi + 2.0) * (terms_ + 1);
}

double HolderFunction::sup_deviation() const {
  const double q = std::pow(static_cast<double>(base_), -gamma_);
  double sum = 0.0, w = 1.0;
  for (int k = 0; k <= terms_; ++k) {
    sum += w;
    w *= q;
  }
  return amplitude_ * sum;
}

int HolderFunction::default_terms(int base, double h) {
  require(base >= 2, Errc::invalid_argument, "default_terms: base must be >= 2");
  require(std::isfinite(h) && h > 0.0 && h < 1.0, Errc::invalid_argument,
          "default_terms: h must lie in (0, 1)");
  int k = static_cast<int>(std::ceil(std::log(1.0 / h) / std::log(double(base))));
  return std::min(k + 2, 60);
}

// ---------------------------------------------------------------------------
// Rooms-and-passages geometry
//
// Room i (1-based) starts at x_i = 2*(5*(1-(4/5)^i) - 1) = 8 - 10*(4/5)^i,
// has width (4/5)^i and half-height 1/i.  Passage i continues from the right
// edge of room i to x_{i+1} with half-height (4/5)^(2i) / (5 i).  Beyond
// roughly 159 rooms the piece widths fall below one ulp of the total extent
// (~8), so larger combs are flagged as extrapolation.

double rooms_room_start(int i) { return 8.0 - 10.0 * std::pow(0.8, i); }

double rooms_passage_half_height(int i) {
  return std::pow(0.8, 2 * i) / (5.0 * i);
}

std::vector<RoomSpec> rooms_and_passages_pieces(int n_rooms) {
  require(n_rooms >= 1, Errc::invalid_argument, "rooms_and_passages: n_rooms must be >= 1");
  std::vector<RoomSpec> pieces;
  pieces.reserve(static_cast<std::size_t>(n_rooms));
  for (int i = 1; i <= n_rooms; ++i) {
    const double x0 = rooms_room_start(i);
    const double w = std::pow(0.8, i);
    const double hh = 1.0 / i;
    RoomSpec spec;
    spec.room = Box2{x0, -hh, x0 + w, hh};
    if (i < n_rooms) {
      const double ph = rooms_passage_half_height(i);
      spec.passage = Box2{x0 + w, -ph, x0 + 2.0 * w, ph};
    }
    pieces.push_back(spec);
  }
  return pieces;
}

// ---------------------------------------------------------------------------
// Domain2D

Domain2D::Domain2D(Variant shape) : shape_(std::move(shape)) {
  if (const auto* rect = std::get_if<Rectangle>(&shape_)) {
    require(std::isfinite(rect->a) && rect->a > 0.0 && std::isfinite(rect->b) && rect->b > 0.0,
            Errc::invalid_argument, "Rectangle: sides must be positive");
    bbox_ = Box2{0.0, 0.0, rect->a, rect->b};
  } else if (const auto* disk = std::get_if<Disk>(&shape_)) {
    require(std::isfinite(disk->r) && disk->r > 0.0, Errc::invalid_argument,
            "Disk: radius must be positive");
    bbox_ = Box2{-disk->r, -disk->r, disk->r, disk->r};
  } else if (const auto* g = std::get_if<GraphDomain>(&shape_)) {
    require(std::isfinite(g->base_lo) && std::isfinite(g->base_hi) && g->base_hi > g->base_lo,
            Errc::invalid_argument, "GraphDomain: base interval is empty");
    require(std::isfinite(g->floor_y), Errc::invalid_argument,
            "GraphDomain: floor must be finite");
    // The profile must stay strictly above the floor.  Dense sampling; a
    // profile that provably dips below is rejected here rather than producing
    // an empty or split column later.
    const int n = 8192;
    for (int i = 0; i <= n; ++i) {
      double x = g->base_lo + (g->base_hi - g->base_lo) * i / n;
      if ((*g).f(x) <= g->floor_y) {
        fail(Errc::invalid_argument,
             "GraphDomain: profile dips to or below the floor near x = " + std::to_string(x));
      }
    }
    bbox_ = Box2{g->base_lo, g->floor_y, g->base_hi, g->f.offset() + g->f.sup_deviation()};
  } else if (auto* rp = std::get_if<RoomsAndPassages>(&shape_)) {
    require(rp->n_rooms >= 1, Errc::invalid_argument,
            "RoomsAndPassages: n_rooms must be >= 1");
    rp->extrapolated = rp->n_rooms > 159;
    auto pieces = rooms_and_passages_pieces(rp->n_rooms);
    segments_.reserve(pieces.size() * 2);
    for (const auto& p : pieces) {
      segments_.push_back({p.room.x0, p.room.x1, p.room.y1});
      if (p.passage) segments_.push_back({p.passage->x0, p.passage->x1, p.passage->y1});
    }
    bbox_ = Box2{0.0, -1.0, segments_.back().x1, 1.0};
  }
}

bool Domain2D::contains(double x, double y) const {
  if (const auto* rect = std::get_if<Rectangle>(&shape_)) {
    return x > 0.0 && x < rect->a && y > 0.0 && y < rect->b;
  }
  if (const auto* disk = std::get_if<Disk>(&shape_)) {
    return x * x + y * y < disk->r * disk->r;
  }
  if (const auto* g = std::get_if<GraphDomain>(&shape_)) {
    if (x <= g->base_lo || x >= g->base_hi || y <= g->floor_y) return false;
    return y < g->f(x);
  }
  // Rooms and passages: segments tile [0, extent) contiguously in x, so a
  // binary search on the start coordinates finds the only candidate.  The
  // half-open convention in x picks one side of each seam; seams have measure
  // zero and cell centers never land on them for the h values in use.
  if (segments_.empty() || x < segments_.front().x0 || x >= segments_.back().x1) return false;
  std::size_t lo = 0, hi = segments_.size();
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if (segments_[mid].x0 <= x) lo = mid; else hi = mid;
  }
  const Segment& s = segments_[lo];
  return x >= s.x0 && x < s.x1 && std::abs(y) <= s.half_height;
}

Box2 Domain2D::bounding_box() const { return bbox_; }

std::string Domain2D::type_name() const {
  if (std::holds_alternative<Rectangle>(shape_)) return "rectangle";
  if (std::holds_alternative<Disk>(shape_)) return "disk";
  if (std::holds_alternative<GraphDomain>(shape_)) return "graph";
  return "rooms_and_passages";
}

Domain2D make_rectangle(double a, double b) { return Domain2D(Rectangle{a, b}); }
Domain2D make_disk(double r) { return Domain2D(Disk{r}); }
Domain2D make_graph_domain(const HolderFunction& f, double base_lo, double base_hi,
                           double floor_y) {
  return Domain2D(GraphDomain{f, base_lo, base_hi, floor_y});
}
Domain2D make_rooms_and_passages(int n_rooms) {
  return Domain2D(RoomsAndPassages{n_rooms, false});
}

// ---------------------------------------------------------------------------
// GridMask

GridMask GridMask::from_cells(double h, double origin_x, double origin_y, int rows,
                              int cols, std::vector<std::uint8_t> cells) {
  require(std::isfinite(h) && h > 0.0, Errc::invalid_argument, "GridMask: h must be positive");
  require(rows >= 1 && cols >= 1, Errc::invalid_argument, "GridMask: empty grid shape");
  require(cells.size() == static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
          Errc::invalid_argument, "GridMask: cell array does not match rows*cols");
  GridMask m;
  m.h_ = h;
  m.ox_ = origin_x;
  m.oy_ = origin_y;
  m.rows_ = rows;
  m.cols_ = cols;
  m.cells_ = std::move(cells);
  m.n_included_ = 0;
  for (auto v : m.cells_) m.n_included_ += (v != 0);
  return m;
}

int GridMask::component_count() const {
  if (n_included_ == 0) return 0;
  const std::int64_t total = total_cells();
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(total), 0);
  int comps = 0;
  std::deque<std::int64_t> queue;
  for (std::int64_t start = 0; start < total; ++start) {
    if (!cells_[start] || seen[start]) continue;
    ++comps;
    seen[start] = 1;
    queue.push_back(start);
    while (!queue.empty()) {
      std::int64_t idx = queue.front();
      queue.pop_front();
      int r = static_cast<int>(idx / cols_);
      int c = static_cast<int>(idx % cols_);
      const int dr[4] = {1, -1, 0, 0};
      const int dc[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        int rr = r + dr[k], cc = c + dc[k];
        if (rr < 0 || rr >= rows_ || cc < 0 || cc >= cols_) continue;
        std::int64_t j = static_cast<std::int64_t>(rr) * cols_ + cc;
        if (cells_[j] && !seen[j]) {
          seen[j] = 1;
          queue.push_back(j);
        }
      }
    }
  }
  return comps;
}

bool GridMask::connected() const { return component_count() <= 1; }

std::vector<std::pair<int, int>> GridMask::included_cells() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(n_included_));
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      if (included(r, c)) out.emplace_back(r, c);
  return out;
}

std::vector<std::int64_t> GridMask::ordinal_map() const {
  std::vector<std::int64_t> map(static_cast<std::size_t>(total_cells()), -1);
  std::int64_t next = 0;
  for (std::int64_t i = 0; i < total_cells(); ++i)
    if (cells_[i]) map[i] = next++;
  return map;
}

namespace {
constexpr char kMaskMagic[8] = {'W', 'L', 'M', 'A', 'S', 'K', '0', '1'};

template <typename T>
void write_pod(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
}  // namespace

// Binary layout (little-endian host assumed): magic, h, origin, rows, cols,
// then bit-packed rows LSB-first, ceil(cols/8) bytes per row.
void GridMask::write_binary(std::ostream& os) const {
  os.write(kMaskMagic, sizeof kMaskMagic);
  write_pod(os, h_);
  write_pod(os, ox_);
  write_pod(os, oy_);
  write_pod(os, static_cast<std::int64_t>(rows_));
  write_pod(os, static_cast<std::int64_t>(cols_));
  const int bytes_per_row = (cols_ + 7) / 8;
  std::vector<std::uint8_t> row(static_cast<std::size_t>(bytes_per_row));
  for (int r = 0; r < rows_; ++r) {
    std::fill(row.begin(), row.end(), 0);
    for (int c = 0; c < cols_; ++c)
      if (included(r, c)) row[c >> 3] |= static_cast<std::uint8_t>(1u << (c & 7));
    os.write(reinterpret_cast<const char*>(row.data()), bytes_per_row);
  }
}

GridMask GridMask::read_binary(std::istream& is) {
  char magic[8];
  is.read(magic, sizeof magic);
  require(is.good() && std::memcmp(magic, kMaskMagic, sizeof magic) == 0,
          Errc::invalid_argument, "GridMask: bad magic in binary stream");
  double h = read_pod<double>(is);
  double ox = read_pod<double>(is);
  double oy = read_pod<double>(is);
  std::int64_t rows = read_pod<std::int64_t>(is);
  std::int64_t cols = read_pod<std::int64_t>(is);
  require(is.good() && rows >= 1 && cols >= 1 && rows * cols <= (std::int64_t(1) << 34),
          Errc::invalid_argument, "GridMask: implausible header in binary stream");
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(rows * cols), 0);
  const int bytes_per_row = static_cast<int>((cols + 7) / 8);
  std::vector<std::uint8_t> row(static_cast<std::size_t>(bytes_per_row));
  for (std::int64_t r = 0; r < rows; ++r) {
    is.read(reinterpret_cast<char*>(row.data()), bytes_per_row);
    require(is.good(), Errc::invalid_argument, "GridMask: truncated binary stream");
    for (std::int64_t c = 0; c < cols; ++c)
      cells[static_cast<std::size_t>(r * cols + c)] = (row[c >> 3] >> (c & 7)) & 1u;
  }
  return from_cells(h, ox, oy, static_cast<int>(rows), static_cast<int>(cols),
                    std::move(cells));
}

void GridMask::write_pgm(std::ostream& os) const {
  os << "P5\n" << cols_ << " " << rows_ << "\n255\n";
  std::vector<std::uint8_t> row(static_cast<std::size_t>(cols_));
  for (int r = rows_ - 1; r >= 0; --r) {  // top of the domain first
    for (int c = 0; c < cols_; ++c) row[c] = included(r, c) ? 255 : 0;
    os.write(reinterpret_cast<const char*>(row.data()), cols_);
  }
}

// ---------------------------------------------------------------------------
// Rasterization

GridMask rasterize(const Domain2D& domain, double h, RasterPolicy policy) {
  require(std::isfinite(h) && h > 0.0, Errc::invalid_argument, "rasterize: h must be positive");
  const Box2 bb = domain.bounding_box();
  const int cols = std::max(1, static_cast<int>(std::ceil(bb.width() / h - 1e-9)));
  const int rows = std::max(1, static_cast<int>(std::ceil(bb.height() / h - 1e-9)));
  require(static_cast<std::int64_t>(rows) * cols <= (std::int64_t(1) << 31),
          Errc::invalid_argument, "rasterize: grid would exceed 2^31 cells");
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(rows) * cols, 0);
  std::size_t idx = 0;
  for (int r = 0; r < rows; ++r) {
    const double cy = bb.y0 + (r + 0.5) * h;
    for (int c = 0; c < cols; ++c, ++idx) {
      const double cx = bb.x0 + (c + 0.5) * h;
      cells[idx] = domain.contains(cx, cy) ? 1 : 0;
    }
  }
  GridMask m = GridMask::from_cells(h, bb.x0, bb.y0, rows, cols, std::move(cells));
  require(m.cell_count() > 0, Errc::resolution_too_coarse,
          "rasterize: no cell centers fall inside the domain at h = " + std::to_string(h));
  if (policy == RasterPolicy::RequireConnected) {
    int comps = m.component_count();
    if (comps > 1) {
      fail(Errc::resolution_too_coarse,
           "rasterize: raster splits into " + std::to_string(comps) +
               " components at h = " + std::to_string(h) +
               " (refine h or use RasterPolicy::AllowDisconnected)");
    }
  }
  return m;
}

MeasureResult measure(const GridMask& m) {
  // Area via the same product order as the quadrature helpers so that
  // count * h^2 here and sum(|V|^(d/2)) * h^d there agree bitwise for V = -1.
  MeasureResult res;
  res.area = static_cast<double>(m.cell_count()) * ipow(m.h(), 2);
  std::int64_t interface_edges = 0;
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (!m.included(r, c)) continue;
      auto excluded = [&m](int rr, int cc) {
        if (rr < 0 || rr >= m.rows() || cc < 0 || cc >= m.cols()) return true;
        return !m.included(rr, cc);
      };
      interface_edges += excluded(r + 1, c) + excluded(r - 1, c) + excluded(r, c + 1) +
                         excluded(r, c - 1);
    }
  }
  res.perimeter = static_cast<double>(interface_edges) * m.h();
  return res;
}

// ---------------------------------------------------------------------------
// Exact Euclidean distance transform (Felzenszwalb-Huttenlocher).  The grid
// is padded with a one-cell excluded ring so that every included cell sees a
// boundary even when the mask fills the grid.

namespace {

// 1-D squared distance transform under the lower envelope of parabolas
// q -> (x-q)^2 + f(q).  f must be finite.
void dt1d(const std::vector<double>& f, std::vector<double>& d, int n,
          std::vector<int>& v, std::vector<double>& z) {
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    double s;
    for (;;) {
      const int p = v[k];
      s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * q - 2.0 * p);
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - double(v[k]);
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

std::vector<double> distance_to_boundary(const GridMask& m) {
  const int R = m.rows() + 2, C = m.cols() + 2;  // padded with the virtual ring
  std::vector<double> g(static_cast<std::size_t>(R) * C);

  // Row pass: squared horizontal distance to the nearest excluded cell in the
  // padded row.  The ring guarantees a seed at both ends of every row.
  for (int r = 0; r < R; ++r) {
    double* row = g.data() + static_cast<std::size_t>(r) * C;
    auto is_seed = [&](int c) {
      if (r == 0 || r == R - 1 || c == 0 || c == C - 1) return true;
      return !m.included(r - 1, c - 1);
    };
    int last = 0;  // column 0 is always a seed
    for (int c = 0; c < C; ++c) {
      if (is_seed(c)) {
        row[c] = 0.0;
        last = c;
      } else {
        row[c] = double(c - last);
      }
    }
    int next = C - 1;
    for (int c = C - 1; c >= 0; --c) {
      if (row[c] == 0.0) {
        next = c;
      } else {
        row[c] = std::min(row[c], double(next - c));
        row[c] *= row[c];
      }
    }
  }

  // Column pass: parabola envelope over the row results.
  std::vector<double> fcol(static_cast<std::size_t>(R)), dcol(static_cast<std::size_t>(R));
  std::vector<int> v(static_cast<std::size_t>(R));
  std::vector<double> z(static_cast<std::size_t>(R) + 1);
  for (int c = 0; c < C; ++c) {
    for (int r = 0; r < R; ++r) fcol[r] = g[static_cast<std::size_t>(r) * C + c];
    dt1d(fcol, dcol, R, v, z);
    for (int r = 0; r < R; ++r) g[static_cast<std::size_t>(r) * C + c] = dcol[r];
  }

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.cell_count()));
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (m.included(r, c))
        out.push_back(m.h() * std::sqrt(g[static_cast<std::size_t>(r + 1) * C + (c + 1)]));
  return out;
}

// ---------------------------------------------------------------------------
// OscillationTable

OscillationTable::OscillationTable(const HolderFunction& f, double lo, double hi,
                                   int levels)
    : lo_(lo), hi_(hi), levels_(levels) {
  require(std::isfinite(lo) && std::isfinite(hi) && hi > lo, Errc::invalid_argument,
          "OscillationTable: empty interval");
  require(levels >= 0 && levels <= 24, Errc::invalid_argument,
          "OscillationTable: levels must lie in [0, 24]");

  const std::int64_t n_blocks = std::int64_t(1) << levels;
  const double block_w = (hi - lo) / static_cast<double>(n_blocks);
  // Sampling density: several points per period of the highest retained
  // frequency, at least 9 per finest block.
  const double top_freq = std::pow(static_cast<double>(f.base()), f.terms());
  int per_block =
      std::max(9, static_cast<int>(std::ceil(4.0 * top_freq * block_w)) + 1);
  per_block = std::min(per_block, 1 << 14);

  slabs_.resize(static_cast<std::size_t>(levels) + 1);
  auto& fine = slabs_[static_cast<std::size_t>(levels)];
  fine.resize(static_cast<std::size_t>(n_blocks));
  for (std::int64_t b = 0; b < n_blocks; ++b) {
    const double x0 = lo + block_w * static_cast<double>(b);
    double mn = kInf, mx = -kInf;
    for (int i = 0; i <= per_block; ++i) {
      const double x = x0 + block_w * i / per_block;
      const double y = f(x);
      mn = std::min(mn, y);
      mx = std::max(mx, y);
    }
    // Round outward: float storage must stay a valid enclosure.
    fine[static_cast<std::size_t>(b)] = {
        std::nextafterf(static_cast<float>(mn), -std::numeric_limits<float>::infinity()),
        std::nextafterf(static_cast<float>(mx), std::numeric_limits<float>::infinity())};
  }
  for (int l = levels - 1; l >= 0; --l) {
    auto& dst = slabs_[static_cast<std::size_t>(l)];
    const auto& src = slabs_[static_cast<std::size_t>(l) + 1];
    dst.resize(src.size() / 2);
    for (std::size_t j = 0; j < dst.size(); ++j) {
      dst[j] = {std::min(src[2 * j].first, src[2 * j + 1].first),
                std::max(src[2 * j].second, src[2 * j + 1].second)};
    }
  }
}

double OscillationTable::block_min(int level, std::int64_t j) const {
  require(level >= 0 && level <= levels_, Errc::invalid_argument,
          "OscillationTable: level out of range");
  const auto& slab = slabs_[static_cast<std::size_t>(level)];
  require(j >= 0 && j < static_cast<std::int64_t>(slab.size()), Errc::invalid_argument,
          "OscillationTable: block index out of range");
  return slab[static_cast<std::size_t>(j)].first;
}

double OscillationTable::block_max(int level, std::int64_t j) const {
  require(level >= 0 && level <= levels_, Errc::invalid_argument,
          "OscillationTable: level out of range");
  const auto& slab = slabs_[static_cast<std::size_t>(level)];
  require(j >= 0 && j < static_cast<std::int64_t>(slab.size()), Errc::invalid_argument,
          "OscillationTable: block index out of range");
  return slab[static_cast<std::size_t>(j)].second;
}

// ---------------------------------------------------------------------------
// Box-counting dimension

DimensionFit box_counting_dimension(const HolderFunction& f, double lo, double hi,
                                    const std::vector<double>& scales) {
  require(hi > lo && std::isfinite(lo) && std::isfinite(hi), Errc::invalid_argument,
          "box_counting_dimension: empty interval");
  require(scales.size() >= 4, Errc::invalid_argument,
          "box_counting_dimension: need at least 4 scales");
  const double len = hi - lo;
  double smin = kInf, smax = 0.0;
  std::vector<int> levels;
  levels.reserve(scales.size());
  for (double eps : scales) {
    require(std::isfinite(eps) && eps > 0.0 && eps <= len, Errc::invalid_argument,
            "box_counting_dimension: scales must lie in (0, |interval|]");
    const double l_real = std::log2(len / eps);
    const int l = static_cast<int>(std::lround(l_real));
    require(std::abs(l_real - l) < 1e-9 && l >= 0 && l <= 24, Errc::invalid_argument,
            "box_counting_dimension: scales must be dyadic fractions of the interval");
    levels.push_back(l);
    smin = std::min(smin, eps);
    smax = std::max(smax, eps);
  }
  require(smax / smin >= 100.0, Errc::invalid_argument,
          "box_counting_dimension: scales must span at least two decades");
  {
    auto sorted = levels;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
            Errc::invalid_argument, "box_counting_dimension: scales must be distinct");
  }

  const int finest = *std::max_element(levels.begin(), levels.end());
  OscillationTable table(f, lo, hi, finest);

  DimensionFit fit;
  fit.scales = scales;
  fit.counts.reserve(scales.size());
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const int l = levels[i];
    const double eps = len / static_cast<double>(std::int64_t(1) << l);
    std::int64_t count = 0;
    for (std::int64_t j = 0; j < (std::int64_t(1) << l); ++j) {
      // Boxes of the fixed eps-grid met by the graph over column j.
      const auto lo_cell = static_cast<std::int64_t>(std::floor(table.block_min(l, j) / eps));
      const auto hi_cell = static_cast<std::int64_t>(std::floor(table.block_max(l, j) / eps));
      count += hi_cell - lo_cell + 1;
    }
    fit.counts.push_back(count);
    xs.push_back(std::log(1.0 / eps));
    ys.push_back(std::log(static_cast<double>(count)));
  }

  const std::size_t n = xs.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  require(sxx > 0.0, Errc::invalid_argument,
          "box_counting_dimension: degenerate fit (zero variance in scales)");
  fit.estimate = sxy / sxx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double resid = ys[i] - (my + fit.estimate * (xs[i] - mx));
    ss += resid * resid;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

}  // namespace weylab
