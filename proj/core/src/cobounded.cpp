#include "coarselab/cobounded.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "coarselab/certify.hpp"
#include "coarselab/gallery.hpp"

namespace coarselab {

const FiniteSpace& Embedding::domain() const {
  if (const auto* u = isometry()) return *u->base_domain();
  return table()->domain();
}

const FiniteSpace& Embedding::codomain() const {
  if (const auto* u = isometry()) return u->codomain();
  return table()->codomain();
}

SpacePtr Embedding::domain_ptr() const {
  if (const auto* u = isometry()) return u->base_domain();
  return table()->domain_ptr();
}

SpacePtr Embedding::codomain_ptr() const {
  if (const auto* u = isometry()) return u->codomain_ptr();
  return table()->codomain_ptr();
}

BandOperator Embedding::apply(const BandOperator& a) const {
  if (const auto* u = isometry()) {
    if (u->fiber_dim() == 1) return conjugate(*u, a);
    return conjugate(*u, amplify(a, u->fiber_dim()));
  }
  return table()->apply(a);
}

const PointMap* Embedding::underlying_map() const {
  const auto* u = isometry();
  if (u && u->point_map()) return &*u->point_map();
  return nullptr;
}

WitnessCheck check_witness(const CoboundedWitness& w, double tol) {
  if (!w.embedding) fail(errc::domain, "witness carries no embedding");
  const Embedding& phi = *w.embedding;
  if (!same_space(w.target.space(), phi.codomain())) {
    fail(errc::domain, "witness target lives over '" + w.target.space().label() +
                           "', embedding lands in '" + phi.codomain().label() + "'");
  }

  WitnessCheck out;
  BandOperator sum = BandOperator::zero(w.target.space_ptr());
  for (const auto& term : w.terms) {
    if (!same_space(term.c.space(), phi.codomain())) {
      fail(errc::domain, "witness corrector lives over the wrong space");
    }
    if (!same_space(term.a.space(), phi.domain())) {
      fail(errc::domain, "witness domain factor lives over the wrong space");
    }
    sum = add(sum, multiply(term.c, phi.apply(term.a)));
    out.max_c_propagation = std::max(out.max_c_propagation, term.c.propagation());
    out.max_c_norm = std::max(out.max_c_norm, operator_norm(term.c, tol));
    out.max_a_norm = std::max(out.max_a_norm, operator_norm(term.a, tol));
  }
  out.residual = operator_norm(subtract(w.target, sum), tol);

  std::ostringstream failure;
  if (out.residual > w.eps) {
    failure << "residual " << out.residual << " exceeds eps " << w.eps << "; ";
  }
  if (out.max_c_propagation > w.k) {
    failure << "corrector propagation " << out.max_c_propagation << " exceeds k " << w.k
            << "; ";
  }
  if (w.ell) {
    if (static_cast<double>(w.terms.size()) > *w.ell) {
      failure << "term count " << w.terms.size() << " exceeds ell " << *w.ell << "; ";
    }
    if (out.max_c_norm > *w.ell + tol) {
      failure << "corrector norm " << out.max_c_norm << " exceeds ell " << *w.ell << "; ";
    }
    if (out.max_a_norm > *w.ell + tol) {
      failure << "domain factor norm " << out.max_a_norm << " exceeds ell " << *w.ell
              << "; ";
    }
  }
  out.failure = failure.str();
  out.pass = out.failure.empty();
  return out;
}

QuotientDecomposition quotient_decomposition(const PointMap& f, Dist k, Dist delta,
                                             const BandOperator& a, Dist eps) {
  if (k < 0 || delta < 0 || eps < 0) {
    fail(errc::domain, "decomposition needs K, delta, eps >= 0");
  }
  if (!same_space(a.space(), f.codomain())) {
    fail(errc::domain, "operator must live over the codomain of the map");
  }
  if (!f.bijective()) {
    fail(errc::domain, "decomposition needs a map bijective onto the window");
  }
  const FiniteSpace& dom = f.domain();
  const FiniteSpace& cod = f.codomain();

  QuotientDecomposition out;
  out.k = k;
  out.delta = delta;
  out.eps_requested = eps;
  out.eps_used = std::max(eps, a.propagation());
  // the separation argument needs eps > K
  const Dist step = std::max<Dist>(cod.min_positive_distance(), 1);
  if (out.eps_used <= k) out.eps_used = k + step;
  if (out.eps_used != eps) {
    std::ostringstream note;
    note << "eps raised from " << eps << " to " << out.eps_used
         << " (needs eps >= propagation(a) and eps > K)";
    out.note = note.str();
  }

  out.partition = separated_partition(cod, 3 * out.eps_used);
  std::vector<int> class_of(cod.size(), -1);
  for (std::size_t i = 0; i < out.partition.classes.size(); ++i) {
    for (const PointId p : out.partition.classes[i]) class_of[p] = static_cast<int>(i);
  }
  std::vector<PointId> preimage_of(cod.size(), 0);
  for (std::size_t x = 0; x < dom.size(); ++x) {
    preimage_of[f(static_cast<PointId>(x))] = static_cast<PointId>(x);
  }

  const IsometryMap u = isometry_from_map(f);

  // group support entries by (row class, column class); entries() is already
  // sorted by (input, output), which is the decided within-block order
  std::map<std::pair<int, int>, std::vector<OperatorEntry>> blocks;
  for (const auto& e : a.entries()) {
    blocks[{class_of[e.y], class_of[e.x]}].push_back(e);
  }

  out.reassembled = BandOperator::zero(a.space_ptr());
  for (const auto& [key, entries] : blocks) {
    DecompositionBlock block;
    block.row_class = key.first;
    block.col_class = key.second;

    std::vector<OperatorEntry> c_entries, d_entries;
    std::set<PointId> used_companions;
    for (const auto& e : entries) {
      const PointId y = e.x;
      const PointId y_prime = e.y;
      const PointId x = preimage_of[y];
      std::optional<PointId> companion;
      for (const PointId z : dom.ball(x, delta)) {
        if (cod.dist(f(z), y_prime) <= k) {
          companion = z;
          break;
        }
      }
      if (!companion) {
        std::ostringstream msg;
        msg << "no companion for support entry: x=" << x << " (f(x)=" << y
            << "), target y'=" << y_prime << " within delta=" << delta
            << ", K=" << k << " (boundary effect or certificate failure)";
        fail(errc::decomposition, msg.str());
      }
      if (!used_companions.insert(*companion).second) {
        std::ostringstream msg;
        msg << "companion collision at z=" << *companion
            << " (separation argument violated; is eps > K?)";
        fail(errc::decomposition, msg.str());
      }
      c_entries.push_back(OperatorEntry{x, *companion, e.value});
      d_entries.push_back(OperatorEntry{f(*companion), y_prime, Scalar{1.0, 0.0}});
      block.pairs.push_back(DecompositionBlock::MatchedPair{y, y_prime, x, *companion});
    }
    block.c = BandOperator(f.domain_ptr(), std::move(c_entries));
    block.d = BandOperator(f.codomain_ptr(), std::move(d_entries));
    if (block.c.propagation() > delta || block.d.propagation() > k) {
      fail(errc::invariant_violation, "decomposition factor exceeds its propagation bound");
    }

    // per-block exactness: block = d · Phi(c)
    BandOperator block_matrix(a.space_ptr(), std::vector<OperatorEntry>(entries));
    const BandOperator product = multiply(block.d, conjugate(u, block.c));
    if (!(product == block_matrix)) {
      fail(errc::invariant_violation, "block product does not reproduce the block");
    }
    out.reassembled = add(out.reassembled, product);
    out.blocks.push_back(std::move(block));
  }

  out.exact = out.reassembled == a;
  return out;
}

CoboundedWitness witness_from_decomposition(const QuotientDecomposition& qd,
                                            const PointMap& f, double tol) {
  CoboundedWitness w;
  w.embedding = std::make_shared<Embedding>(isometry_from_map(f));
  w.target = qd.reassembled;
  w.eps = 0.0;
  w.k = qd.k;
  double ell = static_cast<double>(qd.blocks.size());
  for (const auto& block : qd.blocks) {
    w.terms.push_back(WitnessTerm{block.d, block.c});
    ell = std::max({ell, operator_norm(block.c, tol), operator_norm(block.d, tol)});
  }
  w.ell = std::max(ell, 1.0);
  return w;
}

CoboundedWitness parity_decomposition(const BandOperator& a, double tol) {
  const FiniteSpace& space = a.space();
  if (space.empty() || !gallery::is_path_window(space)) {
    fail(errc::domain,
         "parity decomposition needs an operator over an N-window {1..N}");
  }
  const Dist n = static_cast<Dist>(space.size());
  const SpacePtr y = a.space_ptr();

  // point of value v has index v-1
  auto id_of = [](Dist v) { return static_cast<PointId>(v - 1); };

  std::vector<PointId> odds, evens;
  for (Dist v = 1; v <= n; ++v) {
    (v % 2 == 1 ? odds : evens).push_back(id_of(v));
  }
  const BandOperator chi_odd = BandOperator::indicator(y, odds);
  const BandOperator chi_even = BandOperator::indicator(y, evens);

  // the shift v -> v-1 on even values; propagation 1
  std::vector<OperatorEntry> shift_entries;
  for (Dist v = 2; v <= n; v += 2) {
    shift_entries.push_back(OperatorEntry{id_of(v), id_of(v - 1), Scalar{1.0, 0.0}});
  }
  const BandOperator shift_down(y, std::move(shift_entries));
  const BandOperator shift_up = shift_down.adjoint();

  gallery::FoldingMap folding = gallery::folding_map(n);
  // rebind the folding codomain to the caller's space so products type-check
  PointMap f(folding.domain.space, y, folding.map.values());
  CoboundedWitness w;
  w.embedding = std::make_shared<Embedding>(isometry_from_map(f));
  w.target = a;
  w.eps = 0.0;
  w.k = 1;

  auto pullback = [&](const BandOperator& t) {
    // u* t u over the domain window; exact entry copies since f is bijective
    std::vector<PointId> preimage_of(y->size(), 0);
    for (std::size_t x = 0; x < f.domain().size(); ++x) {
      preimage_of[f(static_cast<PointId>(x))] = static_cast<PointId>(x);
    }
    std::vector<OperatorEntry> entries;
    entries.reserve(t.entries().size());
    for (const auto& e : t.entries()) {
      entries.push_back(OperatorEntry{preimage_of[e.x], preimage_of[e.y], e.value});
    }
    return BandOperator(f.domain_ptr(), std::move(entries));
  };
  auto push_term = [&](const BandOperator& corrector, const BandOperator& block) {
    if (block.is_zero()) return;
    w.terms.push_back(WitnessTerm{corrector, pullback(block)});
  };

  const BandOperator block_oo = multiply(chi_odd, multiply(a, chi_odd));
  const BandOperator block_ee = multiply(chi_even, multiply(a, chi_even));
  const BandOperator block_eo = multiply(chi_even, multiply(a, chi_odd));  // rows even
  const BandOperator block_oe = multiply(chi_odd, multiply(a, chi_even));  // rows odd

  push_term(chi_odd, block_oo);
  push_term(chi_even, block_ee);
  // rows in P: route through the shift, block = shift_up · (shift_down · block)
  push_term(shift_up, multiply(shift_down, block_eo));
  if (n % 2 == 0) {
    push_term(shift_down, multiply(shift_up, block_oe));
  } else {
    // shift_up misses the top odd row N; split it off through e_{N-1,N}
    const BandOperator chi_top = BandOperator::indicator(y, {id_of(n)});
    const BandOperator top_rows = multiply(chi_top, block_oe);
    const BandOperator rest = subtract(block_oe, top_rows);
    push_term(shift_down, multiply(shift_up, rest));
    if (!top_rows.is_zero()) {
      if (n < 2) fail(errc::domain, "parity decomposition needs N >= 2 for cross blocks");
      const BandOperator lift = BandOperator::matrix_unit(y, id_of(n - 1), id_of(n));
      push_term(lift, multiply(lift.adjoint(), top_rows));
    }
  }

  double ell = static_cast<double>(w.terms.size());
  for (const auto& term : w.terms) {
    ell = std::max({ell, operator_norm(term.a, tol), operator_norm(term.c, tol)});
  }
  w.ell = std::max(ell, 1.0);
  return w;
}

AlmostCoboundedReport almost_cobounded_diagnostic(const Embedding& phi, Dist k, Dist eps,
                                                  const std::vector<BandOperator>& probes,
                                                  double tol) {
  AlmostCoboundedReport report;
  report.k = k;
  report.eps = eps;
  const PointMap* f = phi.underlying_map();

  for (const auto& probe : probes) {
    if (!same_space(probe.space(), phi.codomain())) {
      fail(errc::domain, "probe lives over the wrong space");
    }
    ProbeReport pr;
    if (!f) {
      pr.note = "pathway unavailable: embedding is not Ad(u_f)";
      report.probes.push_back(std::move(pr));
      continue;
    }
    const FiniteSpace& dom = f->domain();
    const FiniteSpace& cod = f->codomain();
    const auto image = f->image();
    std::vector<char> in_image(cod.size(), 0);
    std::vector<PointId> preimage_of(cod.size(), 0);
    for (std::size_t x = 0; x < dom.size(); ++x) {
      in_image[(*f)(static_cast<PointId>(x))] = 1;
      preimage_of[(*f)(static_cast<PointId>(x))] = static_cast<PointId>(x);
    }

    const Dist eps_use = std::max({eps, probe.propagation(),
                                   k + std::max<Dist>(cod.min_positive_distance(), 1)});
    pr.delta = cococoarse_witness(*f, k, eps_use);

    if (f->bijective() && pr.delta) {
      try {
        const auto qd = quotient_decomposition(*f, k, *pr.delta, probe, eps_use);
        CoboundedWitness w = witness_from_decomposition(qd, *f, tol);
        const auto check = check_witness(w, tol);
        pr.admits_witness = check.pass && check.max_c_propagation <= k;
        pr.residual = check.residual;
      } catch (const error& e) {
        if (e.code() != errc::decomposition) throw;
        pr.note = e.what();
      }
    } else if (!f->bijective()) {
      pr.note = "pathway unavailable: map is not bijective onto the window";
    } else {
      pr.note = "pathway unavailable: no co-coarse witness at this scale";
    }

    // Obstruction scan: an entry at (input v, output w) can only be routed
    // through a corrector of propagation <= k via image points z near w; the
    // domain factor then needs propagation >= d(f^{-1}(v), f^{-1}(z)).
    for (const auto& e : probe.entries()) {
      std::optional<Dist> rho;
      if (in_image[e.x]) {
        for (const PointId z : cod.ball(e.y, k)) {
          if (!in_image[z]) continue;
          const Dist d = dom.dist(preimage_of[e.x], preimage_of[z]);
          if (!rho || d < *rho) rho = d;
        }
      }
      if (!rho) {
        pr.unreachable.push_back(ProbeEntryObstruction{e.x, e.y});
      } else if (*rho >= pr.max_required_domain_distance) {
        if (*rho > pr.max_required_domain_distance || !pr.worst_entry) {
          pr.worst_entry = ProbeEntryObstruction{e.x, e.y};
        }
        pr.max_required_domain_distance = *rho;
      }
    }
    pr.flagged = !pr.unreachable.empty() ||
                 (pr.delta && pr.max_required_domain_distance > *pr.delta) ||
                 (!pr.delta && !probe.is_zero() && !pr.admits_witness);
    report.probes.push_back(std::move(pr));
  }
  return report;
}

}  // namespace coarselab
