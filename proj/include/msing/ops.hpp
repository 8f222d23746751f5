#ifndef MSING_OPS_HPP
#define MSING_OPS_HPP

// The cohomological side: Milnor-basis Steenrod algebras A(n), the
// A(n)-A(n-1)-bimodules C(n) and B(n), obtained by dualizing the algebras of
// dualalg.hpp.  A functional is stored as a left-H-linear combination of
// symbols rho(E,R) dual to the monomial basis tau^E xi^R; products and
// actions are computed through the pairing
//     <theta(f (x) g), m (x) n> = (-1)^{|g||m|} f(m * g(n))
// against the (finite, per-bidegree) coproduct/coaction of basis monomials.

#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "dualalg.hpp"
#include "linalg.hpp"

namespace msing {

// ---------------------------------------------------------------------------
// Elements

struct MilnorElem {
  Profile pr;
  AlgTag tag;
  std::map<Mono, HPoly> ts;

  MilnorElem() = default;
  MilnorElem(Profile p, AlgTag t) : pr(p), tag(t) {}

  bool zero() const { return ts.empty(); }
  void add(const Mono& m, const HPoly& h) {
    if (h.zero()) return;
    HPoly& slot = ts[m];
    slot.add(pr, h);
    if (slot.zero()) ts.erase(m);
  }
  void add(const MilnorElem& o, int scale = 1) {
    for (auto& [m, h] : o.ts) add(m, hp_scale(pr, h, scale));
  }
  void add_scaled(const MilnorElem& o, const HPoly& h) {
    for (auto& [m, c] : o.ts) add(m, hp_mul(pr, h, c));
  }
  bool operator==(const MilnorElem& o) const { return ts == o.ts; }

  static MilnorElem sym(Profile p, AlgTag t, const Mono& m, HPoly h = HPoly::one()) {
    MilnorElem e(p, t);
    Mono mm = m;
    mm.trim();
    if (mono_admissible(t, mm, p.ell)) e.add(mm, h);
    return e;
  }
  static MilnorElem unit(Profile p, AlgTag t) { return sym(p, t, Mono{}); }
};

// Named operations.  beta^e P^r = rho((e),(r)); Q_i = rho(e_i = 1);
// P_i^j = rho(E = 0, r_i = ell^j); Sq^{2r} = P^r, Sq^{2r+1} = beta P^r.
inline MilnorElem milnor_bP(Profile pr, AlgTag tag, int e, int r) {
  Mono m;
  m.E = e ? 1u : 0u;
  if (r != 0) m.set_r(1, r);
  return MilnorElem::sym(pr, tag, m);
}
inline MilnorElem milnor_P(Profile pr, AlgTag tag, int r) {
  return milnor_bP(pr, tag, 0, r);
}
inline MilnorElem milnor_Q(Profile pr, AlgTag tag, int i) {
  Mono m;
  m.E = 1u << i;
  return MilnorElem::sym(pr, tag, m);
}
inline MilnorElem milnor_Pij(Profile pr, AlgTag tag, int i, int j) {
  Mono m;
  m.set_r(i, static_cast<int>(ipow(pr.ell, j)));
  return MilnorElem::sym(pr, tag, m);
}
inline MilnorElem milnor_Sq(Profile pr, AlgTag tag, int k) {
  if (pr.ell != 2) throw std::invalid_argument("Sq requires ell = 2");
  return milnor_bP(pr, tag, k & 1, k >= 0 ? k / 2 : -((-k + 1) / 2));
}

// Cohomological bidegree of the component h * rho(m): (deg m + a, wt m + a + b).
inline std::set<std::pair<long long, long long>> cohom_bidegrees(const MilnorElem& x) {
  std::set<std::pair<long long, long long>> out;
  for (auto& [m, h] : x.ts)
    for (auto& [hm, c] : h.ts)
      out.insert({mono_deg(m, x.pr.ell) + hm.a,
                  mono_wt(m, x.pr.ell) + hm.a + hm.b});
  return out;
}

// ---------------------------------------------------------------------------
// F_ell-basis (coefficient monomial, symbol monomial) of the tagged algebra
// in one cohomological bidegree (P, Q).  Uses a + 2b = #E(m) - (P - 2Q),
// with #E bounded by the tag (or by P for the full algebra).

inline std::vector<std::pair<HMono, Mono>> hbasis_cohomological(
    const Profile& pr, const AlgTag& tag, long long P, long long Q) {
  int nE = (tag.kind == AlgTag::Full) ? static_cast<int>(std::max<long long>(0, P))
                                      : tag.n + 1;
  long long cap = nE - (P - 2 * Q);
  std::vector<std::pair<HMono, Mono>> out;
  int amax = (pr.kind == ProfileKind::Real) ? static_cast<int>(std::max<long long>(cap, 0)) : 0;
  int bmax = (pr.kind == ProfileKind::Trivial) ? 0 : 1 << 20;
  for (int a = 0; a <= amax; ++a)
    for (int b = 0; b <= bmax && a + 2LL * b <= cap; ++b)
      for (auto& m : monos_of_bidegree(pr, tag, P - a, Q - a - b))
        out.push_back({HMono{a, b}, m});
  return out;
}

// Memoized variant for resolution hot paths, where the same bidegrees recur
// across many generators and levels.
inline const std::vector<std::pair<HMono, Mono>>& hbasis_cohomological_cached(
    const Profile& pr, const AlgTag& tag, long long P, long long Q) {
  using Key = std::tuple<int, ProfileKind, int, int, long long, long long>;
  static std::map<Key, std::vector<std::pair<HMono, Mono>>> cache;
  Key k{pr.ell, pr.kind, static_cast<int>(tag.kind), tag.n, P, Q};
  auto it = cache.find(k);
  if (it == cache.end())
    it = cache.emplace(std::move(k), hbasis_cohomological(pr, tag, P, Q)).first;
  return it->second;
}

inline std::vector<int> flatten(const MilnorElem& x,
                                const std::vector<std::pair<HMono, Mono>>& basis) {
  std::vector<int> v(basis.size(), 0);
  for (size_t i = 0; i < basis.size(); ++i) {
    auto it = x.ts.find(basis[i].second);
    if (it == x.ts.end()) continue;
    auto jt = it->second.ts.find(basis[i].first);
    if (jt != it->second.ts.end()) v[i] = jt->second;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Memoized coproducts/coactions of basis monomials

namespace detail {

struct CoKey {
  int ell;
  ProfileKind kind;
  int which;  // 0 psi_An, 1 coact_left, 2 coact_right
  AlgTag::Kind tk;
  int n;
  Mono m;
  bool operator<(const CoKey& o) const {
    return std::tie(ell, kind, which, tk, n, m) <
           std::tie(o.ell, o.kind, o.which, o.tk, o.n, o.m);
  }
};

inline const Tensor& co_mono(const Profile& pr, const AlgTag& tag, const Mono& m,
                             int which) {
  static std::map<CoKey, Tensor> cache;
  CoKey key{pr.ell, pr.kind, which, tag.kind, tag.n, m};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  DualElem e = DualElem::monomial(pr, tag, m);
  Tensor t = which == 0 ? coproduct(e) : which == 1 ? coact_left(e) : coact_right(e);
  return cache.emplace(key, std::move(t)).first->second;
}

// Core of all dual products/actions: given functionals f on the left tensor
// factor and g on the right one, assemble sum_m <theta(f (x) g), co(m)> rho(m)
// over candidate basis monomials m of out_tag.
inline MilnorElem dual_action(const MilnorElem& f, const MilnorElem& g,
                              const AlgTag& out_tag, int which) {
  const Profile& pr = f.pr;
  MilnorElem out(pr, out_tag);
  if (f.zero() || g.zero()) return out;
  int nE = out_tag.n + 1;
  std::set<Mono> cand;
  for (auto& [P1, Q1] : cohom_bidegrees(f))
    for (auto& [P2, Q2] : cohom_bidegrees(g)) {
      long long P = P1 + P2, Q = Q1 + Q2;
      for (auto& [hm, m] : hbasis_cohomological(pr, out_tag, P, Q)) {
        (void)hm;
        cand.insert(m);
      }
      (void)nE;
    }
  for (auto& m : cand) {
    const Tensor& cm = co_mono(pr, out_tag, m, which);
    HPoly val;
    for (auto& [mm, h] : cm.ts) {
      auto itg = g.ts.find(mm.second);
      if (itg == g.ts.end()) continue;
      HPoly gv = hp_mul(pr, h, itg->second);  // g(h * m2) = h * g(m2)
      if (gv.zero()) continue;
      int sign = 1;
      if (pr.ell != 2 &&
          (mono_deg(mm.first, pr.ell) * mono_deg(mm.second, pr.ell)) % 2)
        sign = pr.ell - 1;
      DualElem me = mul(DualElem::monomial(pr, cm.tagL, mm.first),
                        eta_right(pr, cm.tagL, gv));  // m1 * g(n), right action
      for (auto& [mj, hj] : me.ts) {
        auto itf = f.ts.find(mj);
        if (itf == f.ts.end()) continue;
        val.add(pr, hp_scale(pr, hp_mul(pr, hj, itf->second), sign));
      }
    }
    out.add(m, val);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Product on A(n)

namespace detail {

inline const MilnorElem& mul_sym_cached(const Profile& pr, const AlgTag& tag,
                                        const Mono& ma, HMono hb, const Mono& mb) {
  static std::map<std::tuple<int, ProfileKind, int, Mono, HMono, Mono>, MilnorElem>
      cache;
  auto key = std::make_tuple(pr.ell, pr.kind, tag.n, ma, hb, mb);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  MilnorElem f = MilnorElem::sym(pr, tag, ma);
  MilnorElem g = MilnorElem::sym(pr, tag, mb, HPoly::mono(pr, hb.a, hb.b));
  MilnorElem v = dual_action(f, g, tag, 0);
  return cache.emplace(key, std::move(v)).first->second;
}

}  // namespace detail

inline MilnorElem milnor_mul(const MilnorElem& a, const MilnorElem& b) {
  if (a.tag.kind != AlgTag::An || !(a.tag == b.tag))
    throw std::invalid_argument("milnor_mul: operands must share an A(n) tag");
  if (!(a.pr == b.pr)) throw std::invalid_argument("milnor_mul: profile mismatch");
  MilnorElem out(a.pr, a.tag);
  for (auto& [ma, ha] : a.ts)
    for (auto& [mb, hb] : b.ts)
      for (auto& [hm, c] : hb.ts) {
        const MilnorElem& p = detail::mul_sym_cached(a.pr, a.tag, ma, hm, mb);
        MilnorElem scaled(a.pr, a.tag);
        scaled.add_scaled(p, hp_scale(a.pr, ha, c));
        out.add(scaled);
      }
  return out;
}

// Re-tag a Milnor element into a larger envelope A(n'), n' >= n (the Milnor
// basis of A(n) is part of that of A(n')).
inline MilnorElem embed_milnor(const MilnorElem& x, int n2) {
  if (x.tag.kind != AlgTag::An || n2 < x.tag.n)
    throw std::invalid_argument("embed_milnor: need A(n) -> A(n'), n' >= n");
  MilnorElem out(x.pr, AlgTag::an(n2));
  for (auto& [m, h] : x.ts) out.add(m, h);
  return out;
}

inline MilnorElem h_times(const Profile& pr, AlgTag tag, const HElem& h) {
  return MilnorElem::sym(pr, tag, Mono{}, h.poly());
}

inline MilnorElem commutator_with_h(const MilnorElem& a, const HElem& h) {
  MilnorElem he = h_times(a.pr, a.tag, h);
  MilnorElem out = milnor_mul(a, he);
  out.add(milnor_mul(he, a), -1);
  return out;
}

// ---------------------------------------------------------------------------
// Bimodule actions on C(n) and B(n)

inline MilnorElem act_left(const MilnorElem& a, const MilnorElem& x) {
  if (x.tag.kind != AlgTag::Cn && x.tag.kind != AlgTag::Bn)
    throw std::invalid_argument("act_left: x must be C(n) or B(n)");
  if (!(a.tag == AlgTag::an(x.tag.n)))
    throw std::invalid_argument("act_left: a must be A(n) for matching n");
  return detail::dual_action(a, x, x.tag, 1);
}

inline MilnorElem act_right(const MilnorElem& x, const MilnorElem& b) {
  if (x.tag.kind != AlgTag::Cn && x.tag.kind != AlgTag::Bn)
    throw std::invalid_argument("act_right: x must be C(n) or B(n)");
  if (!(b.tag == AlgTag::an(x.tag.n - 1)))
    throw std::invalid_argument("act_right: b must be A(n-1)");
  return detail::dual_action(x, b, x.tag, 2);
}

inline MilnorElem act_bimodule(const MilnorElem& a, const MilnorElem& x,
                               const MilnorElem& b) {
  return act_right(act_left(a, x), b);
}

// Projection B(n) -> C(n): rho(E,R) for r_1 >= 0, zero otherwise.
inline MilnorElem b_to_c(const MilnorElem& x) {
  if (x.tag.kind != AlgTag::Bn)
    throw std::invalid_argument("b_to_c: tag must be B(n)");
  MilnorElem out(x.pr, AlgTag::cn(x.tag.n));
  for (auto& [m, h] : x.ts)
    if (m.r(1) >= 0) out.add(m, h);
  return out;
}

// C(n) -> B(n) basiswise (the localization map is injective on the basis).
inline MilnorElem c_to_b(const MilnorElem& x) {
  if (x.tag.kind != AlgTag::Cn)
    throw std::invalid_argument("c_to_b: tag must be C(n)");
  MilnorElem out(x.pr, AlgTag::bn(x.tag.n));
  for (auto& [m, h] : x.ts) out.add(m, h);
  return out;
}

// ---------------------------------------------------------------------------
// Free-module decompositions of B(n)

// B(n) is free as a left A(n)-module on {P^r : ell^n | r}: write x = sum a_i P^{r_i}.
inline std::vector<std::pair<MilnorElem, int>> decompose_left_An(const MilnorElem& x) {
  if (x.tag.kind != AlgTag::Bn || x.tag.n < 0)
    throw std::invalid_argument("decompose_left_An: tag must be B(n), n >= 0");
  const Profile& pr = x.pr;
  int n = x.tag.n;
  long long pn = ipow(pr.ell, n);
  AlgTag an = AlgTag::an(n);
  std::map<int, MilnorElem> acc;
  for (auto& [P, Q] : cohom_bidegrees(x)) {
    // unknowns: (coefficient monomial, A(n) symbol, r)
    struct Col {
      HMono hm;
      Mono m;
      int r;
    };
    std::vector<Col> cols;
    for (auto& mA : monos_up_to_degree(pr, an, 1 << 20)) {
      long long cap = mono_ecount(mA) - (P - 2 * Q);
      for (int a = 0; a <= (pr.kind == ProfileKind::Real ? cap : 0); ++a)
        for (int b = 0; a + 2LL * b <= cap; ++b) {
          if (!pr.allows(a, b)) continue;
          long long dnum = P - mono_deg(mA, pr.ell) - a;
          if (dnum % (2 * pr.ell - 2)) continue;
          long long r = dnum / (2 * pr.ell - 2);
          if (r % pn) continue;
          if (mono_wt(mA, pr.ell) + a + b + (pr.ell - 1) * r != Q) continue;
          cols.push_back({HMono{a, b}, mA, static_cast<int>(r)});
          if (pr.kind == ProfileKind::Trivial) break;
        }
    }
    auto basis = hbasis_cohomological(pr, x.tag, P, Q);
    FpMat A(pr.ell, static_cast<int>(basis.size()), static_cast<int>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) {
      MilnorElem aj = MilnorElem::sym(pr, an, cols[j].m,
                                      HPoly::mono(pr, cols[j].hm.a, cols[j].hm.b));
      MilnorElem col = act_left(aj, milnor_P(pr, x.tag, cols[j].r));
      auto v = flatten(col, basis);
      for (size_t i = 0; i < basis.size(); ++i)
        A.at(static_cast<int>(i), static_cast<int>(j)) = v[i];
    }
    // restrict x to this bidegree
    MilnorElem xc(pr, x.tag);
    for (auto& [hm, m] : basis) {
      auto it = x.ts.find(m);
      if (it == x.ts.end()) continue;
      auto jt = it->second.ts.find(hm);
      if (jt != it->second.ts.end()) xc.add(m, HPoly::mono(pr, hm.a, hm.b, jt->second));
    }
    auto sol = fp_solve(A, flatten(xc, basis));
    if (!sol) throw std::runtime_error("decompose_left_An: not in the span");
    for (size_t j = 0; j < cols.size(); ++j)
      if ((*sol)[j]) {
        auto it = acc.find(cols[j].r);
        if (it == acc.end()) it = acc.emplace(cols[j].r, MilnorElem(pr, an)).first;
        it->second.add(cols[j].m,
                       HPoly::mono(pr, cols[j].hm.a, cols[j].hm.b, (*sol)[j]));
      }
  }
  std::vector<std::pair<MilnorElem, int>> out;
  for (auto& [r, a] : acc) out.push_back({a, r});
  return out;
}

// B(n) is free as a right A(n-1)-module on {beta^e P^r : e in {0,1}, r in Z}.
inline std::vector<std::pair<std::pair<int, int>, MilnorElem>> decompose_right_An1(
    const MilnorElem& x) {
  if (x.tag.kind != AlgTag::Bn || x.tag.n < 1)
    throw std::invalid_argument("decompose_right_An1: tag must be B(n), n >= 1");
  const Profile& pr = x.pr;
  int n = x.tag.n;
  AlgTag an1 = AlgTag::an(n - 1);
  std::map<std::pair<int, int>, MilnorElem> acc;
  for (auto& [P, Q] : cohom_bidegrees(x)) {
    struct Col {
      int e, r;
      HMono hm;
      Mono m;
    };
    std::vector<Col> cols;
    for (auto& mB : monos_up_to_degree(pr, an1, 1 << 20))
      for (int e = 0; e <= 1; ++e) {
        long long cap = mono_ecount(mB) + e - (P - 2 * Q);
        for (int a = 0; a <= (pr.kind == ProfileKind::Real ? cap : 0); ++a)
          for (int b = 0; a + 2LL * b <= cap; ++b) {
            if (!pr.allows(a, b)) continue;
            long long wnum = Q - mono_wt(mB, pr.ell) - a - b;
            if (wnum % (pr.ell - 1)) continue;
            long long r = wnum / (pr.ell - 1);
            if (e + (2 * pr.ell - 2) * r + mono_deg(mB, pr.ell) + a != P) continue;
            cols.push_back({e, static_cast<int>(r), HMono{a, b}, mB});
            if (pr.kind == ProfileKind::Trivial) break;
          }
      }
    auto basis = hbasis_cohomological(pr, x.tag, P, Q);
    FpMat A(pr.ell, static_cast<int>(basis.size()), static_cast<int>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) {
      MilnorElem bj = MilnorElem::sym(pr, an1, cols[j].m,
                                      HPoly::mono(pr, cols[j].hm.a, cols[j].hm.b));
      MilnorElem col = act_right(milnor_bP(pr, x.tag, cols[j].e, cols[j].r), bj);
      auto v = flatten(col, basis);
      for (size_t i = 0; i < basis.size(); ++i)
        A.at(static_cast<int>(i), static_cast<int>(j)) = v[i];
    }
    MilnorElem xc(pr, x.tag);
    for (auto& [hm, m] : basis) {
      auto it = x.ts.find(m);
      if (it == x.ts.end()) continue;
      auto jt = it->second.ts.find(hm);
      if (jt != it->second.ts.end()) xc.add(m, HPoly::mono(pr, hm.a, hm.b, jt->second));
    }
    auto sol = fp_solve(A, flatten(xc, basis));
    if (!sol) throw std::runtime_error("decompose_right_An1: not in the span");
    for (size_t j = 0; j < cols.size(); ++j)
      if ((*sol)[j]) {
        auto key = std::make_pair(cols[j].e, cols[j].r);
        auto it = acc.find(key);
        if (it == acc.end()) it = acc.emplace(key, MilnorElem(pr, an1)).first;
        it->second.add(cols[j].m,
                       HPoly::mono(pr, cols[j].hm.a, cols[j].hm.b, (*sol)[j]));
      }
  }
  std::vector<std::pair<std::pair<int, int>, MilnorElem>> out;
  for (auto& [er, b] : acc) out.push_back({er, b});
  return out;
}

}  // namespace msing

#endif  // MSING_OPS_HPP
