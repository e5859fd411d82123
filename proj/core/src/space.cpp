#include "coarselab/space.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>

namespace coarselab {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::size: return "size";
    case errc::connectivity: return "connectivity";
    case errc::validation: return "validation";
    case errc::domain: return "domain";
    case errc::injectivity: return "injectivity";
    case errc::group_axiom: return "group-axiom";
    case errc::frame: return "frame";
    case errc::malformed_embedding: return "malformed-embedding";
    case errc::decomposition: return "decomposition";
    case errc::invariant_violation: return "invariant-violation";
    case errc::numeric: return "numeric";
    case errc::io: return "io";
  }
  return "unknown";
}

namespace {

// Deterministic 64-bit mix, used to sample triples above the exhaustive cap.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t kTripleCap = 20'000'000;

}  // namespace

void FiniteSpace::check_point(PointId x) const {
  if (x >= n_) {
    fail(errc::domain, "point id " + std::to_string(x) + " out of range for space '" +
                           label_ + "' of size " + std::to_string(n_));
  }
}

Dist FiniteSpace::dist(PointId x, PointId y) const {
  check_point(x);
  check_point(y);
  if (kind_ == Kind::explicit_matrix) {
    return matrix_[static_cast<std::size_t>(x) * n_ + y];
  }
  // l1 distance between decoded grid coordinates
  Dist d = 0;
  Dist a = x, b = y;
  for (int i = 0; i < dim_; ++i) {
    Dist ca = a % side_, cb = b % side_;
    d += ca > cb ? ca - cb : cb - ca;
    a /= side_;
    b /= side_;
  }
  return d;
}

void FiniteSpace::finalize_explicit(bool allow_nonmetric, bool skip_triangle) {
  const std::size_t n = n_;
  min_pos_ = std::numeric_limits<Dist>::max();
  diameter_ = 0;
  std::vector<Dist> realized{0};
  realized.reserve(n + 1);
  for (std::size_t x = 0; x < n; ++x) {
    if (matrix_[x * n + x] != 0) {
      fail(errc::validation, "space '" + label_ + "': dist(" + std::to_string(x) +
                                 "," + std::to_string(x) + ") must be 0");
    }
    for (std::size_t y = x + 1; y < n; ++y) {
      const Dist d = matrix_[x * n + y];
      if (d != matrix_[y * n + x]) {
        fail(errc::validation, "space '" + label_ + "': asymmetric pair (" +
                                   std::to_string(x) + "," + std::to_string(y) + ")");
      }
      if (d < 1) {
        fail(errc::validation,
             "space '" + label_ + "': distinct points (" + std::to_string(x) + "," +
                 std::to_string(y) + ") at distance " + std::to_string(d) +
                 " violate discreteness (min positive distance >= 1)");
      }
      min_pos_ = std::min(min_pos_, d);
      diameter_ = std::max(diameter_, d);
      realized.push_back(d);
    }
  }
  if (min_pos_ == std::numeric_limits<Dist>::max()) min_pos_ = 0;
  std::sort(realized.begin(), realized.end());
  realized.erase(std::unique(realized.begin(), realized.end()), realized.end());
  realized_ = std::move(realized);

  if (skip_triangle) return;

  // Triangle inequality: exhaustive below the triple cap, deterministic
  // sampling above it.
  auto check_triple = [&](std::size_t x, std::size_t y, std::size_t z) -> bool {
    const Dist xz = matrix_[x * n + z];
    const Dist xy = matrix_[x * n + y];
    const Dist yz = matrix_[y * n + z];
    if (xz > xy + yz) {
      violation_ = TriangleViolation{static_cast<PointId>(x), static_cast<PointId>(y),
                                     static_cast<PointId>(z)};
      return false;
    }
    return true;
  };
  const std::uint64_t total = static_cast<std::uint64_t>(n) * n * n;
  bool ok = true;
  if (total <= kTripleCap) {
    for (std::size_t x = 0; ok && x < n; ++x)
      for (std::size_t y = 0; ok && y < n; ++y)
        for (std::size_t z = 0; ok && z < n; ++z) ok = check_triple(x, y, z);
  } else {
    for (std::uint64_t i = 0; ok && i < kTripleCap; ++i) {
      const std::uint64_t h = mix64(i);
      const std::size_t x = static_cast<std::size_t>(h % n);
      const std::size_t y = static_cast<std::size_t>((h / n) % n);
      const std::size_t z = static_cast<std::size_t>((h / n / n) % n);
      ok = check_triple(x, y, z);
    }
  }
  if (!ok) {
    if (!allow_nonmetric) {
      const auto& v = *violation_;
      std::ostringstream msg;
      msg << "space '" << label_ << "': triangle inequality fails at (" << v.x << ","
          << v.y << "," << v.z << "): dist(" << v.x << "," << v.z << ")="
          << matrix_[static_cast<std::size_t>(v.x) * n + v.z] << " > "
          << matrix_[static_cast<std::size_t>(v.x) * n + v.y] << "+"
          << matrix_[static_cast<std::size_t>(v.y) * n + v.z];
      fail(errc::validation, msg.str());
    }
    nonmetric_ = true;
  }
}

FiniteSpace FiniteSpace::from_distance_matrix(std::string label,
                                              const std::vector<std::vector<Dist>>& dist,
                                              bool allow_nonmetric,
                                              std::size_t point_cap) {
  FiniteSpace s;
  s.label_ = std::move(label);
  s.n_ = dist.size();
  if (s.n_ > point_cap) {
    fail(errc::size, "space '" + s.label_ + "' has " + std::to_string(s.n_) +
                         " points; cap is " + std::to_string(point_cap));
  }
  s.kind_ = Kind::explicit_matrix;
  s.matrix_.resize(s.n_ * s.n_);
  for (std::size_t x = 0; x < s.n_; ++x) {
    if (dist[x].size() != s.n_) {
      fail(errc::validation, "space '" + s.label_ + "': row " + std::to_string(x) +
                                 " has wrong length");
    }
    for (std::size_t y = 0; y < s.n_; ++y) {
      const Dist d = dist[x][y];
      if (d < 0 || d > std::numeric_limits<std::int32_t>::max()) {
        fail(errc::validation, "space '" + s.label_ + "': distance out of range at (" +
                                   std::to_string(x) + "," + std::to_string(y) + ")");
      }
      s.matrix_[x * s.n_ + y] = static_cast<std::int32_t>(d);
    }
  }
  s.finalize_explicit(allow_nonmetric);
  return s;
}

FiniteSpace FiniteSpace::from_edges(std::string label, std::size_t n,
                                    const std::vector<std::pair<PointId, PointId>>& edges,
                                    std::size_t point_cap) {
  if (n > point_cap) {
    fail(errc::size, "space '" + label + "' has " + std::to_string(n) +
                         " points; cap is " + std::to_string(point_cap));
  }
  std::vector<std::vector<PointId>> adj(n);
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) {
      fail(errc::domain, "edge (" + std::to_string(a) + "," + std::to_string(b) +
                             ") out of range for " + std::to_string(n) + " points");
    }
    if (a == b) continue;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }

  FiniteSpace s;
  s.label_ = std::move(label);
  s.n_ = n;
  s.kind_ = Kind::explicit_matrix;
  s.matrix_.assign(n * n, -1);
  for (std::size_t src = 0; src < n; ++src) {
    std::queue<PointId> frontier;
    frontier.push(static_cast<PointId>(src));
    s.matrix_[src * n + src] = 0;
    while (!frontier.empty()) {
      const PointId u = frontier.front();
      frontier.pop();
      const std::int32_t du = s.matrix_[src * n + u];
      for (const PointId v : adj[u]) {
        if (s.matrix_[src * n + v] < 0) {
          s.matrix_[src * n + v] = du + 1;
          frontier.push(v);
        }
      }
    }
    for (std::size_t y = 0; y < n; ++y) {
      if (s.matrix_[src * n + y] < 0) {
        fail(errc::connectivity, "graph space '" + s.label_ + "': no path between " +
                                     std::to_string(src) + " and " + std::to_string(y) +
                                     " (disconnected graph has no finite metric)");
      }
    }
  }
  // shortest-path metrics satisfy the triangle inequality by construction
  s.finalize_explicit(/*allow_nonmetric=*/false, /*skip_triangle=*/true);
  return s;
}

FiniteSpace FiniteSpace::grid(std::string label, int dim, Dist side,
                              std::size_t point_cap) {
  if (dim < 1 || side < 1) {
    fail(errc::domain, "grid window needs dim >= 1 and side >= 1");
  }
  std::uint64_t count = 1;
  for (int i = 0; i < dim; ++i) {
    count *= static_cast<std::uint64_t>(side);
    if (count > point_cap) {
      fail(errc::size, "grid window " + std::to_string(side) + "^" + std::to_string(dim) +
                           " exceeds the point cap " + std::to_string(point_cap));
    }
  }
  FiniteSpace s;
  s.label_ = std::move(label);
  s.n_ = static_cast<std::size_t>(count);
  s.kind_ = Kind::grid;
  s.dim_ = dim;
  s.side_ = side;
  s.min_pos_ = s.n_ > 1 ? 1 : 0;
  s.diameter_ = s.n_ > 1 ? static_cast<Dist>(dim) * (side - 1) : 0;
  s.realized_.resize(static_cast<std::size_t>(s.diameter_) + 1);
  for (std::size_t i = 0; i < s.realized_.size(); ++i) s.realized_[i] = static_cast<Dist>(i);
  if (side > 1) {
    for (std::size_t p = 0; p < s.n_; ++p) {
      Dist rest = static_cast<Dist>(p);
      bool on_face = false;
      for (int i = 0; i < dim && !on_face; ++i) {
        const Dist c = rest % side;
        on_face = (c == 0 || c == side - 1);
        rest /= side;
      }
      if (on_face) s.boundary_.push_back(static_cast<PointId>(p));
    }
  } else {
    // a single slab is all boundary
    for (std::size_t p = 0; p < s.n_; ++p) s.boundary_.push_back(static_cast<PointId>(p));
  }
  s.grid_faces_ = true;
  return s;
}

FiniteSpace FiniteSpace::with_label(std::string label) const {
  FiniteSpace s = *this;
  s.label_ = std::move(label);
  return s;
}

FiniteSpace FiniteSpace::with_truncation_boundary(std::vector<PointId> boundary) const {
  FiniteSpace s = *this;
  std::sort(boundary.begin(), boundary.end());
  boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
  for (const PointId b : boundary) s.check_point(b);
  s.boundary_ = std::move(boundary);
  s.grid_faces_ = false;
  return s;
}

FiniteSpace FiniteSpace::with_interior_margin(Dist margin) const {
  if (margin < 0) fail(errc::domain, "interior margin must be nonnegative");
  FiniteSpace s = *this;
  s.margin_ = margin;
  return s;
}

std::vector<PointId> FiniteSpace::ball(PointId x, Dist r) const {
  check_point(x);
  std::vector<PointId> out;
  if (r < 0) return out;
  for (std::size_t y = 0; y < n_; ++y) {
    if (dist(x, static_cast<PointId>(y)) <= r) out.push_back(static_cast<PointId>(y));
  }
  return out;
}

std::vector<PointId> FiniteSpace::neighborhood(const std::vector<PointId>& a,
                                               Dist k) const {
  std::vector<PointId> out;
  if (a.empty() || k < 0) return out;
  for (const PointId p : a) check_point(p);
  for (std::size_t y = 0; y < n_; ++y) {
    for (const PointId p : a) {
      if (dist(static_cast<PointId>(y), p) <= k) {
        out.push_back(static_cast<PointId>(y));
        break;
      }
    }
  }
  return out;
}

std::int64_t FiniteSpace::growth(Dist r) const {
  std::int64_t best = 0;
  for (std::size_t x = 0; x < n_; ++x) {
    std::int64_t count = 0;
    for (std::size_t y = 0; y < n_; ++y) {
      if (dist(static_cast<PointId>(x), static_cast<PointId>(y)) <= r) ++count;
    }
    best = std::max(best, count);
  }
  return best;
}

std::optional<Dist> FiniteSpace::boundary_distance(PointId x) const {
  check_point(x);
  if (boundary_.empty()) return std::nullopt;
  if (grid_faces_ && side_ > 1) {
    // nearest face in l1: the smallest per-axis margin
    Dist rest = x;
    Dist best = std::numeric_limits<Dist>::max();
    for (int i = 0; i < dim_; ++i) {
      const Dist c = rest % side_;
      best = std::min(best, std::min(c, side_ - 1 - c));
      rest /= side_;
    }
    return best;
  }
  Dist best = std::numeric_limits<Dist>::max();
  for (const PointId b : boundary_) best = std::min(best, dist(x, b));
  return best;
}

bool FiniteSpace::is_interior(PointId x, Dist radius) const {
  const auto d = boundary_distance(x);
  if (!d) return true;
  return *d > radius + margin_;
}

std::vector<PointId> FiniteSpace::interior_points(Dist radius) const {
  std::vector<PointId> out;
  for (std::size_t x = 0; x < n_; ++x) {
    if (is_interior(static_cast<PointId>(x), radius)) out.push_back(static_cast<PointId>(x));
  }
  return out;
}

int FiniteSpace::grid_dim() const {
  if (kind_ != Kind::grid) fail(errc::domain, "space '" + label_ + "' is not a grid window");
  return dim_;
}

Dist FiniteSpace::grid_side() const {
  if (kind_ != Kind::grid) fail(errc::domain, "space '" + label_ + "' is not a grid window");
  return side_;
}

std::vector<Dist> FiniteSpace::grid_coordinates(PointId x) const {
  check_point(x);
  if (kind_ != Kind::grid) fail(errc::domain, "space '" + label_ + "' is not a grid window");
  std::vector<Dist> coords(dim_);
  Dist rest = x;
  for (int i = dim_ - 1; i >= 0; --i) {
    coords[i] = rest % side_;
    rest /= side_;
  }
  return coords;
}

PointId FiniteSpace::grid_point(const std::vector<Dist>& coords) const {
  if (kind_ != Kind::grid) fail(errc::domain, "space '" + label_ + "' is not a grid window");
  if (coords.size() != static_cast<std::size_t>(dim_)) {
    fail(errc::domain, "coordinate arity mismatch for grid '" + label_ + "'");
  }
  Dist idx = 0;
  for (int i = 0; i < dim_; ++i) {
    if (coords[i] < 0 || coords[i] >= side_) {
      fail(errc::domain, "coordinate out of range for grid '" + label_ + "'");
    }
    idx = idx * side_ + coords[i];
  }
  return static_cast<PointId>(idx);
}

FiniteSpace build_grid_window(int dim, Dist side, std::size_t point_cap) {
  std::ostringstream label;
  label << "Z^" << dim << "[" << side << "]";
  return FiniteSpace::grid(label.str(), dim, side, point_cap);
}

FiniteSpace build_graph_space(std::size_t n,
                              const std::vector<std::pair<PointId, PointId>>& edges,
                              std::size_t point_cap) {
  std::ostringstream label;
  label << "graph[" << n << "," << edges.size() << "]";
  return FiniteSpace::from_edges(label.str(), n, edges, point_cap);
}

Partition separated_partition(const FiniteSpace& space, Dist k) {
  if (k < 1) fail(errc::domain, "separated_partition requires K >= 1");
  Partition out;
  out.separation = k;
  for (std::size_t x = 0; x < space.size(); ++x) {
    const PointId p = static_cast<PointId>(x);
    bool placed = false;
    for (auto& cls : out.classes) {
      bool fits = true;
      for (const PointId q : cls) {
        if (space.dist(p, q) < k) {
          fits = false;
          break;
        }
      }
      if (fits) {
        cls.push_back(p);
        placed = true;
        break;
      }
    }
    if (!placed) out.classes.push_back({p});
  }
  return out;
}

void validate_partition(const FiniteSpace& space, const Partition& partition) {
  std::vector<char> seen(space.size(), 0);
  for (const auto& cls : partition.classes) {
    for (std::size_t i = 0; i < cls.size(); ++i) {
      if (cls[i] >= space.size()) fail(errc::domain, "partition point out of range");
      if (seen[cls[i]]++) fail(errc::validation, "partition classes are not disjoint");
      for (std::size_t j = i + 1; j < cls.size(); ++j) {
        if (space.dist(cls[i], cls[j]) < partition.separation) {
          fail(errc::validation,
               "partition class violates " + std::to_string(partition.separation) +
                   "-separation at (" + std::to_string(cls[i]) + "," +
                   std::to_string(cls[j]) + ")");
        }
      }
    }
  }
  for (std::size_t x = 0; x < space.size(); ++x) {
    if (!seen[x]) fail(errc::validation, "partition does not cover point " + std::to_string(x));
  }
}

std::int64_t growth_function(const FiniteSpace& space, Dist r) {
  return space.growth(r);
}

}  // namespace coarselab
