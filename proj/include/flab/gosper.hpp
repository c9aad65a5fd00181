#pragma once

// Gosper-island tiling of the plane and its self-similar hierarchy.
//
// Two coordinate frames are used throughout:
//   * the raw frame, where level-0 tile centers are the Eisenstein integers
//     a + b*w (w = exp(i*pi/3), unit spacing) and G0 is the limit of the
//     hexagon -> 7-hexagon substitution about the origin;
//   * the normalized frame, the raw frame scaled by s0 = 1/diam_raw(G0) so that
//     G0 has diameter 1. All public geometry (points, distances, diameters)
//     is in the normalized frame unless a name says "raw".
//
// The expansion is lambda = 2 + w = (5 + i*sqrt(3))/2, |lambda|^2 = 7. A level-n
// tile with lattice coordinate c occupies s0 * lambda^{-n} * (c + G0).

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "flab/point.hpp"

namespace flab {

/// Element a + b*w of the Eisenstein integers.
struct Eisenstein {
  std::int64_t a = 0;
  std::int64_t b = 0;

  constexpr Eisenstein operator+(Eisenstein o) const { return {a + o.a, b + o.b}; }
  constexpr Eisenstein operator-(Eisenstein o) const { return {a - o.a, b - o.b}; }
  constexpr bool operator==(const Eisenstein&) const = default;
  constexpr bool is_zero() const { return a == 0 && b == 0; }
};

/// z * lambda, exact.
constexpr Eisenstein mul_lambda(Eisenstein z) { return {2 * z.a - z.b, z.a + 3 * z.b}; }

/// Child digits: 0 followed by the six units 1, w, w^2, -1, -w, -w^2.
/// They form a complete residue system modulo lambda.
inline constexpr std::array<Eisenstein, 7> kDigits{{
    {0, 0}, {1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

/// Unit steps to the six lattice neighbors (same order as kDigits[1..6]).
inline constexpr std::array<Eisenstein, 6> kUnits{{
    {1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

struct DigitSplit {
  Eisenstein quotient;
  int digit = 0;  // index into kDigits
};

/// Unique decomposition z = lambda * quotient + kDigits[digit].
DigitSplit split_digit(Eisenstein z);

/// Nearest Eisenstein integer (hexagonal Voronoi rounding) in the raw frame.
Eisenstein hex_round(Complex v);

Complex to_complex(Eisenstein z);

namespace gosper {

inline constexpr double kAbsLambda = 2.6457513110645905905;     // sqrt(7)
inline constexpr double kLogAbsLambda = 0.97295507452765665255;  // log(sqrt(7))
inline constexpr double kSqrt3 = 1.7320508075688772935;
inline const Complex kLambda{2.5, kSqrt3 / 2.0};

/// One substitution step keeps each new polyline within this factor times the
/// replaced segment length.
inline constexpr double kStepDeviation = kSqrt3 / 14.0;  // 0.1237179...
/// Geometric-series bound on the limit arc's distance from a segment it refines,
/// as a fraction of that segment's length.
inline constexpr double kLimitDeviation = 0.1988920398564045;  // sqrt(21)/(14(sqrt7-1))

/// Side of the generation-0 hexagon in the raw frame (Voronoi cell of unit lattice).
inline constexpr double kRawHexSide = 0.57735026918962576451;  // 1/sqrt(3)

/// Deepest generation for which boundary polygons are materialized.
inline constexpr int kMaxPolygonGeneration = 12;
/// Deepest generation used by digit-rounding membership tests (int64 headroom).
inline constexpr int kMaxMembershipGeneration = 24;

/// Diameter of G0 in the raw frame (see golden constants).
double raw_diameter();
/// Normalized level-0 lattice spacing s0 = 1 / raw_diameter().
double level0_spacing();
/// Radius of the largest origin-centered disk inside G0, raw frame.
double raw_inradius();

/// Length of a generation-g boundary segment, raw frame.
double raw_segment_length(int g);

/// Upper bound on the distance between the generation-g polygon and the true
/// tile boundary, raw frame, for a unit (level-0) tile.
double raw_polygon_deviation(int g);

/// lambda^k (exact rotation, |lambda|^k modulus).
Complex lambda_power(int k);

/// Smallest generation whose polygon deviation, for a tile with the given
/// normalized diameter, is below `tolerance`.
int generation_for(double tile_diameter, double tolerance);

}  // namespace gosper

/// A tile G in the hierarchy: level n and lattice coordinate a + b*w at that level.
struct TileAddress {
  int level = 0;
  std::int64_t a = 0;
  std::int64_t b = 0;

  auto operator<=>(const TileAddress&) const = default;

  Eisenstein coord() const { return {a, b}; }
  static TileAddress at(int level, Eisenstein c) { return {level, c.a, c.b}; }
};

struct TileAddressHash {
  std::size_t operator()(const TileAddress& t) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(t.a) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(t.b) * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(t.level) * 0x165667B19E3779F9ull;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

std::string to_string(const TileAddress& t);

/// The 7 level-(n+1) tiles whose union is `tile`; element 0 is the central child.
std::array<TileAddress, 7> children(const TileAddress& tile);
TileAddress parent(const TileAddress& tile);
/// k-fold parent; `level` must not exceed tile.level.
TileAddress ancestor(const TileAddress& tile, int level);
/// The six same-level tiles sharing boundary with `tile`.
std::array<TileAddress, 6> neighbors(const TileAddress& tile);
bool is_neighbor(const TileAddress& x, const TileAddress& y);
/// True when `tile` lies inside `anc` (including equality).
bool is_within(const TileAddress& tile, const TileAddress& anc);

Point center(const TileAddress& tile);
/// |lambda|^{-n}.
double diameter(const TileAddress& tile);

/// Affine placement of the raw tile G0: z = center + scale * w.
/// `scale` is complex so it carries the lambda^{-n} rotation of level-n tiles.
struct TileFrame {
  Complex center{0.0, 0.0};
  Complex scale{1.0, 0.0};

  static TileFrame of(const TileAddress& tile);
  /// A copy of G0 (level-0 orientation) scaled to diameter `diam` about `c`.
  static TileFrame with_diameter(Point c, double diam);

  /// theta (.) G: homothetic expansion about the center, theta > 0.
  TileFrame blown_up(double theta) const { return {center, scale * theta}; }
  /// Complex factor: rotation and expansion about the center.
  TileFrame blown_up(Complex theta) const { return {center, scale * theta}; }

  Complex to_raw(Point z) const { return (to_complex(z) - center) / scale; }
  Point from_raw(Complex w) const { return to_point(center + scale * w); }

  double diameter() const;
  double circumradius() const { return 0.5 * diameter(); }
  double inradius() const;
  Point center_point() const { return to_point(center); }
};

/// Membership of raw point w in the generation-g approximation P_g of G0,
/// decided by exact digit reduction of the hexagonal rounding of lambda^g * w.
bool raw_tile_contains(Complex w, int generation);

/// Region theta (.) G tested against its generation-g polygon.
struct Region {
  TileFrame frame;
  int generation = 10;

  bool contains(Point z) const { return raw_tile_contains(frame.to_raw(z), generation); }
  double circumradius() const { return frame.circumradius(); }
  double inradius() const { return frame.inradius(); }
  Point center() const { return frame.center_point(); }
};

/// lambda^k (.) A = z + lambda^k (A - z) with z the center of A: a translate of
/// the level-(n - k) tile shape. This is the blow-up the Whitney construction
/// uses; its nesting properties fail for the real homothety by |lambda|^k.
Region lambda_blow_up(const TileAddress& tile, int k, int generation = -1);

// Exact set relations between lambda blow-ups. lambda^k (.) A is the
// level-(n - k) tile shape translated to A's center, so it is a union of 7^k
// level-n tiles and both tests reduce to digit arithmetic on the lattice.

/// The closed sets lambda^k (.) a and lambda^j (.) b intersect (touching counts).
bool blowups_meet(const TileAddress& a, int k, const TileAddress& b, int j);
inline bool blowups_meet(const TileAddress& a, const TileAddress& b, int k) { return blowups_meet(a, k, b, k); }

/// lambda^k (.) inner is contained in lambda^j (.) outer.
bool blowup_within(const TileAddress& inner, int k, const TileAddress& outer, int j);

/// theta (.) A. The generation defaults to one whose deviation is 1e-6 of the
/// blown-up diameter.
Region blow_up(const TileAddress& tile, double theta, int generation = -1);
Region blow_up(const TileFrame& frame, double theta, int generation = -1);

/// Level-n tile containing z. Points within `tolerance` (normalized units) of a
/// boundary between tiles resolve to the lexicographically smallest address.
TileAddress locate(Point z, int level, int generation = 18, double tolerance = 1e-12);

struct BoundaryPolygon {
  int generation = 0;
  std::vector<Point> vertices;  // counter-clockwise, closed implicitly
};

/// Generation-g polygonal approximation of dG0 in the raw frame.
std::vector<Complex> raw_boundary_polygon(int generation);

/// Generation-g polygon of G0, normalized to diameter 1, centered at the origin.
/// Throws CapacityError when generation > kMaxPolygonGeneration.
BoundaryPolygon boundary_polygon(int generation);

/// Generation-g polygon of an arbitrary placed tile (normalized frame).
std::vector<Point> tile_polygon(const TileFrame& frame, int generation);

/// Polyline distance queries against the generation-g boundary of G0 (raw
/// frame). Built once per generation and immutable afterwards.
class BoundaryIndex {
 public:
  explicit BoundaryIndex(int generation);
  /// Index over an arbitrary closed polyline (any frame); generation() is -1.
  explicit BoundaryIndex(std::vector<Point> closed_polyline);

  int generation() const { return generation_; }
  /// Euclidean distance from raw point w to the polygon boundary.
  double distance(Complex w) const;
  const std::vector<Point>& vertices() const { return verts_; }

 private:
  int generation_;
  std::vector<Point> verts_;
  double x0_ = 0.0, y0_ = 0.0, cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::uint32_t> cell_start_;
  std::vector<std::uint32_t> cell_segments_;
};

/// Shared index for generation g (0 <= g <= 8), built on first use.
const BoundaryIndex& boundary_index(int generation);

/// Distance from z to the complement of the tile, normalized units, computed
/// against the generation-g polygon minus its deviation bound (so never an
/// overestimate). Zero or negative when z is outside.
double depth(const TileFrame& frame, Point z, int generation = 6);

/// z in core(G, eta): inside G at distance > eta * diam(G) from the complement.
bool core_contains(const TileFrame& frame, double eta, Point z, int generation = 6);
bool core_contains(const TileAddress& tile, double eta, Point z, int generation = 6);

struct TilingConstants {
  double d0 = 0.0;        // minimal gap between nonadjacent level-0 tiles
  double eta0 = 0.0;      // largest eta with every d0-segment meeting some core(G, 2 eta)
  double inradius = 0.0;  // radius of the centered disk inside G0
  int a2 = 0;             // minimal integer with |lambda|^{3-a2} <= eta0/2
  int a3 = 0;             // minimal integer > 1 with |lambda|^{3-a3} < d0
  int generation = 0;     // polygon generation used
};

struct ConstantsSearch {
  int start_grid = 28;     // start points per bbox side for the eta0 search
  int angles = 24;         // directions in [0, pi/3)
  int samples = 48;        // points per segment
  double resolution = 1e-3;
};

/// Certified lower bounds for d0 / inradius and a sampled search for eta0.
/// Throws Error when the d0 bound is not positive at this generation.
TilingConstants compute_constants(int generation, const ConstantsSearch& search = {});

/// Diameter of the generation-g vertex set (a lower bound converging to diam G0), raw frame.
double compute_raw_diameter(int generation);
/// Distance from the origin to the generation-g boundary minus its deviation bound, raw frame.
double compute_raw_inradius(int generation);

/// Stored constants produced by tools/gen_constants (see golden.hpp).
TilingConstants golden_constants();

int min_a2(double eta0);
int min_a3(double d0);

/// Hausdorff distance between two closed polylines, sampling `per_segment`
/// points on each edge in addition to the vertices.
double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b,
                          int per_segment = 8);

/// Max over segments of generation g of the distance of their generation-(g+1)
/// replacement from the segment, divided by its length.
double max_step_deviation(int generation);

/// Max over the six hexagon edges of the distance of the generation-g refinement
/// from that edge, divided by the edge length.
double max_cumulative_deviation(int generation);

}  // namespace flab
