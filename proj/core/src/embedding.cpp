#include "coarselab/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace coarselab {

FiniteSpace product_space(const FiniteSpace& base, int fiber_dim) {
  if (fiber_dim < 1) fail(errc::domain, "fiber dimension must be >= 1");
  const std::size_t n = base.size() * static_cast<std::size_t>(fiber_dim);
  std::vector<std::vector<Dist>> dist(n, std::vector<Dist>(n, 0));
  for (std::size_t p = 0; p < n; ++p) {
    const PointId xp = static_cast<PointId>(p / fiber_dim);
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      const PointId xq = static_cast<PointId>(q / fiber_dim);
      dist[p][q] = xp == xq ? 1 : base.dist(xp, xq);
    }
  }
  FiniteSpace out = FiniteSpace::from_distance_matrix(
      base.label() + "x{1.." + std::to_string(fiber_dim) + "}", dist,
      /*allow_nonmetric=*/false, std::max(kDefaultPointCap, n));
  std::vector<PointId> boundary;
  for (const PointId b : base.truncation_boundary()) {
    for (int i = 0; i < fiber_dim; ++i) boundary.push_back(product_point(b, i, fiber_dim));
  }
  return out.with_truncation_boundary(std::move(boundary))
      .with_interior_margin(base.interior_margin());
}

BandOperator amplify(const BandOperator& a, int fiber_dim) {
  if (fiber_dim < 1) fail(errc::domain, "amplify needs n >= 1");
  SpacePtr product = share(product_space(a.space(), fiber_dim));
  std::vector<OperatorEntry> entries;
  entries.reserve(a.entries().size() * static_cast<std::size_t>(fiber_dim));
  for (const auto& e : a.entries()) {
    for (int i = 0; i < fiber_dim; ++i) {
      entries.push_back(OperatorEntry{product_point(e.x, i, fiber_dim),
                                      product_point(e.y, i, fiber_dim), e.value});
    }
  }
  return BandOperator(std::move(product), std::move(entries));
}

IsometryMap::IsometryMap(Kind kind, SpacePtr base, SpacePtr codomain, int fiber_dim,
                         std::vector<Column> columns, double tol)
    : kind_(kind), codomain_(std::move(codomain)), fiber_dim_(fiber_dim),
      columns_(std::move(columns)) {
  if (!base || !codomain_) fail(errc::domain, "isometry needs both spaces");
  if (fiber_dim_ < 1) fail(errc::domain, "isometry fiber dimension must be >= 1");
  if (kind_ == Kind::plain && fiber_dim_ != 1) {
    fail(errc::domain, "plain isometries have fiber dimension 1");
  }
  base_ = base;
  domain_ = kind_ == Kind::plain ? base_ : share(product_space(*base, fiber_dim_));
  if (columns_.size() != domain_->size()) {
    fail(errc::domain, "isometry needs one column per domain point");
  }
  for (auto& col : columns_) {
    std::sort(col.begin(), col.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [p, v] : col) {
      (void)v;
      if (p >= codomain_->size()) fail(errc::domain, "isometry column entry out of range");
    }
  }
  // columns orthonormal: u* u = identity on the domain side
  for (std::size_t p = 0; p < columns_.size(); ++p) {
    for (std::size_t q = p; q < columns_.size(); ++q) {
      Scalar dot{0.0, 0.0};
      auto itp = columns_[p].begin();
      auto itq = columns_[q].begin();
      while (itp != columns_[p].end() && itq != columns_[q].end()) {
        if (itp->first < itq->first) ++itp;
        else if (itq->first < itp->first) ++itq;
        else {
          dot += std::conj(itp->second) * itq->second;
          ++itp;
          ++itq;
        }
      }
      const Scalar expected = p == q ? Scalar{1.0, 0.0} : Scalar{0.0, 0.0};
      if (std::abs(dot - expected) > tol) {
        std::ostringstream msg;
        msg << "isometry columns " << p << "," << q << " not orthonormal (deviation "
            << std::abs(dot - expected) << ")";
        fail(errc::frame, msg.str());
      }
    }
  }
}

std::vector<Scalar> IsometryMap::apply_column(PointId domain_point) const {
  std::vector<Scalar> out(codomain_->size(), Scalar{0.0, 0.0});
  for (const auto& [p, v] : columns_[domain_point]) out[p] = v;
  return out;
}

IsometryMap isometry_from_map(const PointMap& f) {
  if (!f.injective()) {
    fail(errc::injectivity, "u_f needs an injective map; a fiber has at least two points");
  }
  std::vector<IsometryMap::Column> columns(f.domain().size());
  for (std::size_t x = 0; x < columns.size(); ++x) {
    columns[x] = {{f(static_cast<PointId>(x)), Scalar{1.0, 0.0}}};
  }
  IsometryMap u(IsometryMap::Kind::plain, f.domain_ptr(), f.codomain_ptr(), 1,
                std::move(columns));
  u.point_map_ = f;
  return u;
}

BandOperator conjugate(const IsometryMap& u, const BandOperator& a) {
  if (!same_space(a.space(), u.domain())) {
    fail(errc::domain, "conjugate: operator lives over '" + a.space().label() +
                           "', isometry acts on '" + u.domain().label() + "'");
  }
  std::map<std::pair<PointId, PointId>, Scalar> acc;
  for (const auto& e : a.entries()) {
    for (const auto& [v, cv] : u.columns()[e.x]) {
      const Scalar left = std::conj(cv) * e.value;
      for (const auto& [w, cw] : u.columns()[e.y]) {
        acc[{v, w}] += left * cw;
      }
    }
  }
  std::vector<OperatorEntry> entries;
  entries.reserve(acc.size());
  for (const auto& [key, value] : acc) {
    entries.push_back(OperatorEntry{key.first, key.second, value});
  }
  return BandOperator(u.codomain_ptr(), std::move(entries));
}

EmbeddingTable::EmbeddingTable(SpacePtr domain, SpacePtr codomain,
                               std::vector<BandOperator> values)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), values_(std::move(values)) {
  if (!domain_ || !codomain_) fail(errc::domain, "embedding table needs both spaces");
  if (values_.size() != domain_->size() * domain_->size()) {
    fail(errc::domain, "embedding table needs one operator per matrix unit");
  }
  for (const auto& op : values_) {
    if (!same_space(op.space(), *codomain_)) {
      fail(errc::domain, "embedding table value lives over the wrong space");
    }
  }
}

EmbeddingTable EmbeddingTable::tabulate_spatial(const IsometryMap& u) {
  const FiniteSpace& x = *u.base_domain();
  const int n = u.fiber_dim();
  std::vector<BandOperator> values;
  values.reserve(x.size() * x.size());
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = 0; b < x.size(); ++b) {
      // Phi(e_{ab}) = sum_i |col(b,i)><col(a,i)|
      std::map<std::pair<PointId, PointId>, Scalar> acc;
      for (int i = 0; i < n; ++i) {
        const auto& ca = u.columns()[product_point(static_cast<PointId>(a), i, n)];
        const auto& cb = u.columns()[product_point(static_cast<PointId>(b), i, n)];
        for (const auto& [v, cv] : ca) {
          const Scalar left = std::conj(cv);
          for (const auto& [w, cw] : cb) acc[{v, w}] += left * cw;
        }
      }
      std::vector<OperatorEntry> entries;
      entries.reserve(acc.size());
      for (const auto& [key, value] : acc) {
        entries.push_back(OperatorEntry{key.first, key.second, value});
      }
      values.emplace_back(u.codomain_ptr(), std::move(entries));
    }
  }
  return EmbeddingTable(u.base_domain(), u.codomain_ptr(), std::move(values));
}

const BandOperator& EmbeddingTable::unit_image(PointId x, PointId y) const {
  if (x >= domain_->size() || y >= domain_->size()) {
    fail(errc::domain, "matrix unit out of range");
  }
  return values_[static_cast<std::size_t>(x) * domain_->size() + y];
}

BandOperator EmbeddingTable::apply(const BandOperator& a) const {
  if (!same_space(a.space(), *domain_)) {
    fail(errc::domain, "embedding applied to an operator over the wrong space");
  }
  BandOperator out = BandOperator::zero(codomain_);
  for (const auto& e : a.entries()) {
    out = add(out, unit_image(e.x, e.y).scaled(e.value));
  }
  return out;
}

namespace {

std::uint64_t lcg_next(std::uint64_t& state) {
  state = state * 6364136223846793005ull + 1442695040888963407ull;
  return state >> 16;
}

}  // namespace

void EmbeddingTable::validate(double tol, bool include_multiplicativity) const {
  const std::size_t n = domain_->size();
  if (n == 0) return;

  // diagonal images: self-adjoint idempotents with near-integer trace
  for (std::size_t x = 0; x < n; ++x) {
    const BandOperator& p = unit_image(static_cast<PointId>(x), static_cast<PointId>(x));
    if (max_entry_distance(p, p.adjoint()) > tol) {
      fail(errc::malformed_embedding,
           "Phi(e_xx) not self-adjoint at x=" + std::to_string(x));
    }
    if (max_entry_distance(multiply(p, p), p) > tol) {
      fail(errc::malformed_embedding,
           "Phi(e_xx) not idempotent at x=" + std::to_string(x));
    }
  }

  // mutual orthogonality of the diagonal projections
  const bool all_pairs = n <= 64;
  std::uint64_t state = 0x00c0ffee12345678ull;
  const std::size_t pair_samples = all_pairs ? n * n : 4096;
  for (std::size_t s = 0; s < pair_samples; ++s) {
    const std::size_t x = all_pairs ? s / n : lcg_next(state) % n;
    const std::size_t y = all_pairs ? s % n : lcg_next(state) % n;
    if (x == y) continue;
    const BandOperator prod = multiply(unit_image(static_cast<PointId>(x), static_cast<PointId>(x)),
                                       unit_image(static_cast<PointId>(y), static_cast<PointId>(y)));
    if (prod.max_abs_entry() > tol) {
      fail(errc::malformed_embedding, "Phi(e_xx), Phi(e_yy) not orthogonal at (" +
                                          std::to_string(x) + "," + std::to_string(y) + ")");
    }
  }

  // adjoint compatibility on sampled pairs
  for (std::size_t s = 0; s < pair_samples; ++s) {
    const std::size_t x = all_pairs ? s / n : lcg_next(state) % n;
    const std::size_t y = all_pairs ? s % n : lcg_next(state) % n;
    const BandOperator lhs = unit_image(static_cast<PointId>(x), static_cast<PointId>(y)).adjoint();
    const BandOperator& rhs = unit_image(static_cast<PointId>(y), static_cast<PointId>(x));
    if (max_entry_distance(lhs, rhs) > tol) {
      fail(errc::malformed_embedding, "Phi(e_xy)* != Phi(e_yx) at (" + std::to_string(x) +
                                          "," + std::to_string(y) + ")");
    }
  }

  if (!include_multiplicativity) return;

  // multiplicativity on sampled triples: Phi(e_yz) Phi(e_xy) = Phi(e_xz)
  const bool all_triples = n <= 20;
  const std::size_t triple_samples = all_triples ? n * n * n : 8192;
  for (std::size_t s = 0; s < triple_samples; ++s) {
    std::size_t x, y, z;
    if (all_triples) {
      x = s / (n * n);
      y = (s / n) % n;
      z = s % n;
    } else {
      x = lcg_next(state) % n;
      y = lcg_next(state) % n;
      z = lcg_next(state) % n;
    }
    const BandOperator lhs = multiply(unit_image(static_cast<PointId>(y), static_cast<PointId>(z)),
                                      unit_image(static_cast<PointId>(x), static_cast<PointId>(y)));
    const BandOperator& rhs = unit_image(static_cast<PointId>(x), static_cast<PointId>(z));
    if (max_entry_distance(lhs, rhs) > tol) {
      fail(errc::malformed_embedding,
           "multiplicativity fails at (" + std::to_string(x) + "," + std::to_string(y) +
               "," + std::to_string(z) + ")");
    }
  }
}

RankProfile rank_profile(const EmbeddingTable& phi, double tol) {
  phi.validate(tol, /*include_multiplicativity=*/false);
  RankProfile out;
  const std::size_t n = phi.domain().size();
  out.ranks_by_point.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    const BandOperator& p = phi.unit_image(static_cast<PointId>(x), static_cast<PointId>(x));
    Scalar trace{0.0, 0.0};
    for (const auto& e : p.entries()) {
      if (e.x == e.y) trace += e.value;
    }
    const double rounded = std::round(trace.real());
    if (std::abs(trace.imag()) > 1e-6 || std::abs(trace.real() - rounded) > 1e-6 ||
        rounded < 1.0) {
      fail(errc::malformed_embedding,
           "Phi(e_xx) has non-integer or vanishing rank at x=" + std::to_string(x));
    }
    out.ranks_by_point[x] = static_cast<PointId>(rounded);
  }
  const PointId common = out.ranks_by_point.empty() ? 0 : out.ranks_by_point[0];
  for (std::size_t x = 0; x < n; ++x) {
    if (out.ranks_by_point[x] != common) out.offenders.push_back(static_cast<PointId>(x));
  }
  if (!out.offenders.empty()) {
    out.kind = RankProfile::Kind::irregular;
    out.n = 0;
  } else {
    out.n = static_cast<int>(common);
    out.kind = common == 1 ? RankProfile::Kind::rank_one_preserving
                           : RankProfile::Kind::one_to_n;
  }
  return out;
}

namespace {

std::vector<Scalar> dense_column(const BandOperator& op, PointId input) {
  std::vector<Scalar> out(op.space().size(), Scalar{0.0, 0.0});
  for (const auto& e : op.entries()) {
    if (e.x == input) out[e.y] = e.value;
  }
  return out;
}

Scalar dot(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  Scalar out{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) out += std::conj(a[i]) * b[i];
  return out;
}

double norm2(const std::vector<Scalar>& a) { return std::sqrt(std::abs(dot(a, a))); }

std::vector<Scalar> apply_dense(const BandOperator& op, const std::vector<Scalar>& v) {
  std::vector<Scalar> out(op.space().size(), Scalar{0.0, 0.0});
  for (const auto& e : op.entries()) out[e.y] += e.value * v[e.x];
  return out;
}

}  // namespace

Frame default_frame(const EmbeddingTable& phi, PointId x0, double tol) {
  if (x0 >= phi.domain().size()) fail(errc::domain, "x0 out of range");
  const BandOperator& p = phi.unit_image(x0, x0);
  Scalar trace{0.0, 0.0};
  for (const auto& e : p.entries())
    if (e.x == e.y) trace += e.value;
  const int rank = static_cast<int>(std::round(trace.real()));

  Frame frame;
  for (std::size_t w = 0; w < phi.codomain().size(); ++w) {
    if (static_cast<int>(frame.vectors.size()) == rank) break;
    std::vector<Scalar> v = dense_column(p, static_cast<PointId>(w));
    for (const auto& f : frame.vectors) {
      const Scalar overlap = dot(f, v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= overlap * f[i];
    }
    const double len = norm2(v);
    if (len > 1e-8) {
      for (auto& c : v) c /= len;
      frame.vectors.push_back(std::move(v));
    }
  }
  if (static_cast<int>(frame.vectors.size()) != rank) {
    fail(errc::frame, "could not extract an orthonormal frame of rank " +
                          std::to_string(rank) + " from Phi(e_x0x0)");
  }
  (void)tol;
  return frame;
}

IsometryMap reconstruct_isometry(const EmbeddingTable& phi, PointId x0,
                                 const std::optional<Frame>& frame_in, double tol) {
  phi.validate(std::max(tol, 1e-9));  // reconstruction leans on multiplicativity
  const RankProfile profile = rank_profile(phi, std::max(tol, 1e-9));
  if (profile.kind == RankProfile::Kind::irregular) {
    fail(errc::domain, "reconstruction needs a 1-to-n rank-preserving table; "
                       "rank profile is irregular");
  }
  const int n = profile.n;
  if (x0 >= phi.domain().size()) fail(errc::domain, "x0 out of range");

  const Frame frame = frame_in ? *frame_in : default_frame(phi, x0);
  if (static_cast<int>(frame.vectors.size()) != n) {
    fail(errc::frame, "frame has " + std::to_string(frame.vectors.size()) +
                          " vectors, expected " + std::to_string(n));
  }
  const BandOperator& p = phi.unit_image(x0, x0);
  for (std::size_t i = 0; i < frame.vectors.size(); ++i) {
    if (frame.vectors[i].size() != phi.codomain().size()) {
      fail(errc::frame, "frame vector has wrong length");
    }
    for (std::size_t j = i; j < frame.vectors.size(); ++j) {
      const Scalar overlap = dot(frame.vectors[i], frame.vectors[j]);
      const Scalar expected = i == j ? Scalar{1.0, 0.0} : Scalar{0.0, 0.0};
      if (std::abs(overlap - expected) > 1e-9) {
        fail(errc::frame, "frame is not orthonormal");
      }
    }
    // v_i must lie in Im(Phi(e_x0x0))
    const std::vector<Scalar> proj = apply_dense(p, frame.vectors[i]);
    double dev = 0.0;
    for (std::size_t j = 0; j < proj.size(); ++j) {
      dev = std::max(dev, std::abs(proj[j] - frame.vectors[i][j]));
    }
    if (dev > 1e-9) fail(errc::frame, "frame vector is not in the image of Phi(e_x0x0)");
  }

  std::vector<IsometryMap::Column> columns(phi.domain().size() * static_cast<std::size_t>(n));
  bool plain_candidate = (n == 1);
  for (std::size_t x = 0; x < phi.domain().size(); ++x) {
    const BandOperator& carrier = phi.unit_image(x0, static_cast<PointId>(x));
    for (int i = 0; i < n; ++i) {
      const std::vector<Scalar> dense = apply_dense(carrier, frame.vectors[i]);
      IsometryMap::Column col;
      for (std::size_t w = 0; w < dense.size(); ++w) {
        if (dense[w] != Scalar{0.0, 0.0}) col.emplace_back(static_cast<PointId>(w), dense[w]);
      }
      if (plain_candidate &&
          (col.size() != 1 || col[0].second != Scalar{1.0, 0.0})) {
        plain_candidate = false;
      }
      columns[product_point(static_cast<PointId>(x), i, n)] = std::move(col);
    }
  }
  const auto kind = plain_candidate ? IsometryMap::Kind::plain : IsometryMap::Kind::amplified;
  return IsometryMap(kind, phi.domain_ptr(), phi.codomain_ptr(), n, std::move(columns),
                     std::max(tol, 1e-9));
}

SpatialCheck verify_spatial(const EmbeddingTable& phi, const IsometryMap& u, double tol) {
  if (!same_space(*u.base_domain(), phi.domain()) ||
      !same_space(u.codomain(), phi.codomain())) {
    fail(errc::domain, "verify_spatial: isometry and table spaces do not match");
  }
  const int n = u.fiber_dim();
  SpatialCheck out;
  out.pass = true;
  for (std::size_t x = 0; x < phi.domain().size(); ++x) {
    for (std::size_t y = 0; y < phi.domain().size(); ++y) {
      std::map<std::pair<PointId, PointId>, Scalar> acc;
      for (int i = 0; i < n; ++i) {
        const auto& cx = u.columns()[product_point(static_cast<PointId>(x), i, n)];
        const auto& cy = u.columns()[product_point(static_cast<PointId>(y), i, n)];
        for (const auto& [v, cv] : cx) {
          const Scalar left = std::conj(cv);
          for (const auto& [w, cw] : cy) acc[{v, w}] += left * cw;
        }
      }
      std::vector<OperatorEntry> entries;
      entries.reserve(acc.size());
      for (const auto& [key, value] : acc) {
        entries.push_back(OperatorEntry{key.first, key.second, value});
      }
      const BandOperator image(phi.codomain_ptr(), std::move(entries));
      const BandOperator diff =
          subtract(image, phi.unit_image(static_cast<PointId>(x), static_cast<PointId>(y)));
      for (const auto& e : diff.entries()) {
        const double dev = std::abs(e.value);
        out.max_deviation = std::max(out.max_deviation, dev);
        if (dev > tol && out.pass) {
          out.pass = false;
          out.counterexample = SpatialCheck::Counterexample{
              static_cast<PointId>(x), static_cast<PointId>(y), e.x, e.y, dev};
        }
      }
    }
  }
  return out;
}

}  // namespace coarselab
