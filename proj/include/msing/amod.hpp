#ifndef MSING_AMOD_HPP
#define MSING_AMOD_HPP

// Bigraded left A(n)-modules presented by generators with an action table
// for the algebra generators {beta, P^1, ..., P^{ell^{n-1}}}.  The action of
// an arbitrary Milnor-basis operation is obtained by expressing it as an
// H-combination of words in the table operations (breadth-first closure of
// A(n), echelonized per bidegree) and applying the words; coefficients are
// commuted through operations via products in A(n), so the noncentral REAL
// coefficient ring is handled uniformly.
//
// Band modules: the lens modules H(L) with their Thom twists, and the
// localized classifying-space bands {u^i v^k} and {c^i d^k}.  Action results
// leaving a band are truncated to zero (quotient convention at the bottom
// edge, sub convention at the top; windows downstream are chosen so edge
// effects cancel).

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "ops.hpp"

namespace msing {

// ---------------------------------------------------------------------------
// Word closure of A(n) over its algebra generators

namespace detail {

// Table operations for envelope n: index 0 = beta, index i = P^i for
// 1 <= i <= ell^{n-1} (none beyond beta when n = 0).
inline int num_table_ops(const Profile& pr, int n) {
  return n >= 1 ? 1 + static_cast<int>(ipow(pr.ell, n - 1)) : 1;
}

inline Mono table_op_mono(int idx) {
  Mono m;
  if (idx == 0)
    m.E = 1;
  else
    m.set_r(1, idx);
  return m;
}

inline std::optional<int> as_table_op(const Profile& pr, int n, const Mono& m) {
  for (int i = 0; i < num_table_ops(pr, n); ++i)
    if (table_op_mono(i) == m) return i;
  return std::nullopt;
}

// A word g_{i1} ... g_{ik} (composition, applied right to left) with an
// H-coefficient on the left; a representation is a sum of such.
struct WordRep {
  std::vector<std::pair<HPoly, std::vector<int>>> terms;
};

struct Closure {
  // per cohomological bidegree: pure words and their algebra values
  std::map<std::pair<long long, long long>,
           std::vector<std::pair<MilnorElem, std::vector<int>>>>
      rows;
  long long maxdeg = -1;
};

inline Closure& word_closure(const Profile& pr, int n, long long need_deg) {
  static std::map<std::tuple<int, ProfileKind, int>, Closure> cache;
  Closure& cl = cache[{pr.ell, pr.kind, n}];
  if (cl.maxdeg >= need_deg) return cl;
  cl.rows.clear();
  AlgTag an = AlgTag::an(n);
  // echelon per bidegree over the flattened F_ell basis
  std::map<std::pair<long long, long long>, FpMat> ech;
  auto bid = [&](const MilnorElem& x) {
    auto s = cohom_bidegrees(x);
    return *s.begin();
  };
  auto try_add = [&](const MilnorElem& x, const std::vector<int>& w) -> bool {
    if (x.zero()) return false;
    auto b = bid(x);
    auto basis = hbasis_cohomological(pr, an, b.first, b.second);
    FpMat& m = ech[b];
    if (m.cols == 0) m = FpMat(pr.ell, 0, static_cast<int>(basis.size()));
    auto v = flatten(x, basis);
    FpMat probe = m;
    probe.rows += 1;
    probe.a.insert(probe.a.end(), v.begin(), v.end());
    if (fp_rank(probe) == m.rows) return false;
    m = std::move(probe);
    cl.rows[b].push_back({x, w});
    return true;
  };
  std::vector<std::pair<MilnorElem, std::vector<int>>> frontier;
  MilnorElem one = MilnorElem::unit(pr, an);
  try_add(one, {});
  frontier.push_back({one, {}});
  while (!frontier.empty()) {
    std::vector<std::pair<MilnorElem, std::vector<int>>> next;
    for (auto& [x, w] : frontier)
      for (int g = 0; g < num_table_ops(pr, n); ++g) {
        MilnorElem gx = milnor_mul(MilnorElem::sym(pr, an, table_op_mono(g)), x);
        if (gx.zero()) continue;
        if (bid(gx).first > need_deg) continue;
        std::vector<int> w2;
        w2.push_back(g);
        w2.insert(w2.end(), w.begin(), w.end());
        if (try_add(gx, w2)) next.push_back({gx, w2});
      }
    frontier = std::move(next);
  }
  cl.maxdeg = need_deg;
  return cl;
}

// Express the pure symbol rho(m) as an H-combination of words.
inline const WordRep& word_rep(const Profile& pr, int n, const Mono& m) {
  static std::map<std::tuple<int, ProfileKind, int, Mono>, WordRep> cache;
  auto key = std::make_tuple(pr.ell, pr.kind, n, m);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  AlgTag an = AlgTag::an(n);
  long long P = mono_deg(m, pr.ell), Q = mono_wt(m, pr.ell);
  Closure& cl = word_closure(pr, n, P);
  auto basis = hbasis_cohomological(pr, an, P, Q);
  // columns: h * (closure row) for every coefficient twist landing in (P,Q)
  struct Col {
    HMono hm;
    const MilnorElem* x;
    const std::vector<int>* w;
  };
  std::vector<Col> cols;
  for (auto& [b, rows] : cl.rows) {
    long long a = P - b.first;
    long long bb = Q - b.second - a;
    if (a < 0 || bb < 0 || !pr.allows(static_cast<int>(a), static_cast<int>(bb)))
      continue;
    for (auto& [x, w] : rows)
      cols.push_back({HMono{static_cast<int>(a), static_cast<int>(bb)}, &x, &w});
  }
  FpMat A(pr.ell, static_cast<int>(basis.size()), static_cast<int>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) {
    MilnorElem hx(pr, an);
    hx.add_scaled(*cols[j].x, HPoly::mono(pr, cols[j].hm.a, cols[j].hm.b));
    auto v = flatten(hx, basis);
    for (size_t i = 0; i < basis.size(); ++i)
      A.at(static_cast<int>(i), static_cast<int>(j)) = v[i];
  }
  auto sol = fp_solve(A, flatten(MilnorElem::sym(pr, an, m), basis));
  if (!sol)
    throw std::runtime_error("word_rep: operations do not span this symbol");
  WordRep wr;
  for (size_t j = 0; j < cols.size(); ++j)
    if ((*sol)[j])
      wr.terms.push_back(
          {HPoly::mono(pr, cols[j].hm.a, cols[j].hm.b, (*sol)[j]), *cols[j].w});
  return cache.emplace(key, std::move(wr)).first->second;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Modules

struct ModElem {
  std::map<int, HPoly> ts;  // generator index -> left H-coefficient

  bool zero() const { return ts.empty(); }
  void add(const Profile& pr, int g, const HPoly& h) {
    if (h.zero()) return;
    HPoly& slot = ts[g];
    slot.add(pr, h);
    if (slot.zero()) ts.erase(g);
  }
  void add(const Profile& pr, const ModElem& o, int scale = 1) {
    for (auto& [g, h] : o.ts) add(pr, g, hp_scale(pr, h, scale));
  }
  void add_scaled(const Profile& pr, const ModElem& o, const HPoly& h) {
    for (auto& [g, c] : o.ts) add(pr, g, hp_mul(pr, h, c));
  }
  bool operator==(const ModElem& o) const { return ts == o.ts; }
  static ModElem gen(int g) {
    ModElem e;
    e.ts[g] = HPoly::one();
    return e;
  }
};

struct FPModule {
  Profile pr;
  int env = 1;  // A(env) envelope
  enum Kind { Generic, BMu, BSigma, Lens } kind = Generic;
  int kmin = 0, kmax = -1;  // band for u^i v^k / c^i d^k modules
  int sp = 0, sq = 0;       // applied suspension Sigma^{sp,sq}

  struct Gen {
    std::string name;
    long long p = 0, q = 0;  // cohomological bidegree
    int i = 0, k = 0;        // band coordinates (u^i v^k etc.), if applicable
  };
  std::vector<Gen> gens;
  // action of table op `op` on generator `g`
  std::map<std::pair<int, int>, ModElem> table;

  mutable std::map<std::pair<Mono, int>, ModElem> act_cache;

  int nops() const { return detail::num_table_ops(pr, env); }
  const ModElem& table_at(int op, int g) const {
    static const ModElem z{};
    auto it = table.find({op, g});
    return it == table.end() ? z : it->second;
  }
  int find_band_gen(int i, int k) const {
    for (size_t g = 0; g < gens.size(); ++g)
      if (gens[g].i == i && gens[g].k == k) return static_cast<int>(g);
    return -1;
  }
  std::pair<long long, long long> bidegree(int g, HMono hm) const {
    return {gens[g].p + hm.a, gens[g].q + hm.a + hm.b};
  }
};

// ---------------------------------------------------------------------------
// Action

namespace detail {

ModElem act_sym_on_gen(const FPModule& M, const Mono& m, int g);

// op symbol rho(m) applied to h * (generator g), commuting the coefficient
// through the operation inside A(env).
inline ModElem act_sym_coeff(const FPModule& M, const Mono& m, const HPoly& h,
                             int g) {
  ModElem out;
  if (m.is_one()) {
    out.add(M.pr, g, h);
    return out;
  }
  bool central = (M.pr.kind != ProfileKind::Real) ||
                 (h.ts.size() == 1 && h.ts.begin()->first == HMono{0, 0});
  if (central) {
    out.add_scaled(M.pr, act_sym_on_gen(M, m, g), h);
    return out;
  }
  AlgTag an = AlgTag::an(M.env);
  MilnorElem prod = milnor_mul(MilnorElem::sym(M.pr, an, m),
                               MilnorElem::sym(M.pr, an, Mono{}, h));
  for (auto& [m2, h2] : prod.ts) {
    ModElem part = act_sym_on_gen(M, m2, g);
    out.add_scaled(M.pr, part, h2);
  }
  return out;
}

inline ModElem act_sym(const FPModule& M, const Mono& m, const ModElem& x) {
  ModElem out;
  for (auto& [g, h] : x.ts) out.add(M.pr, act_sym_coeff(M, m, h, g));
  return out;
}

inline ModElem act_sym_on_gen(const FPModule& M, const Mono& m, int g) {
  if (m.is_one()) return ModElem::gen(g);
  auto it = M.act_cache.find({m, g});
  if (it != M.act_cache.end()) return it->second;
  ModElem out;
  if (auto op = as_table_op(M.pr, M.env, m)) {
    out = M.table_at(*op, g);
  } else {
    const WordRep& wr = word_rep(M.pr, M.env, m);
    for (auto& [h, w] : wr.terms) {
      ModElem y = ModElem::gen(g);
      for (auto rit = w.rbegin(); rit != w.rend(); ++rit)
        y = act_sym(M, table_op_mono(*rit), y);
      out.add_scaled(M.pr, y, h);
    }
  }
  M.act_cache[{m, g}] = out;
  return out;
}

}  // namespace detail

// Action of a Milnor-basis operation (tagged A(env)) on a module element.
inline ModElem act(const FPModule& M, const MilnorElem& op, const ModElem& x) {
  if (!(op.tag == AlgTag::an(M.env)))
    throw std::invalid_argument("act: operation tag must match module envelope");
  ModElem out;
  for (auto& [m, h] : op.ts) {
    ModElem part = detail::act_sym(M, m, x);
    ModElem scaled;
    scaled.add_scaled(M.pr, part, h);
    out.add(M.pr, scaled);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Module constructors

inline FPModule trivial_module(Profile pr, int env) {
  FPModule M;
  M.pr = pr;
  M.env = env;
  M.gens.push_back({"1", 0, 0, 0, 0});
  return M;
}

namespace detail {

// Shared constructor for the u^i v^k band family.
//   BMu:   |u| = (1,1),  |v| = (2,1);
//          P^r(u v^k) = binom(k,r) u v^{(l-1)r+k},
//          beta P^r(u v^k) = binom(k,r) v^{(l-1)r+1+k},
//          P^r(v^k) = binom(k,r) v^{(l-1)r+k},  beta P^r(v^k) = 0.
//   BSigma: |c| = (2l-3, l-1), |d| = (2l-2, l-1);
//          P^r(c d^k) = (-1)^r binom((l-1)(k+1)-1, r) c d^{r+k},
//          beta P^r(c d^k) = (-1)^r binom((l-1)(k+1)-1, r) d^{r+1+k},
//          P^r(d^k) = (-1)^r binom((l-1)k, r) d^{r+k},  beta P^r(d^k) = 0.
inline FPModule band_module(Profile pr, int env, FPModule::Kind kind, int kmin,
                            int kmax) {
  FPModule M;
  M.pr = pr;
  M.env = env;
  M.kind = kind;
  M.kmin = kmin;
  M.kmax = kmax;
  int ell = pr.ell;
  bool mu = kind == FPModule::BMu;
  long long up = mu ? 1 : 2 * ell - 3, uq = mu ? 1 : ell - 1;
  long long vp = mu ? 2 : 2 * ell - 2, vq = mu ? 1 : ell - 1;
  const char* un = mu ? "u" : "c";
  const char* vn = mu ? "v" : "d";
  for (int k = kmin; k <= kmax; ++k)
    for (int i = 0; i <= 1; ++i) {
      FPModule::Gen g;
      g.i = i;
      g.k = k;
      g.p = i * up + k * vp;
      g.q = i * uq + k * vq;
      g.name = (i ? std::string(un) + "*" : std::string()) + vn + "^" +
               std::to_string(k);
      M.gens.push_back(g);
    }
  auto coef_i1 = [&](int k, int r) {  // coefficient for source u^1 v^k
    return mu ? binom_mod(k, r, ell)
              : fp_mul(fp_sign(r, ell),
                       binom_mod((ell - 1LL) * (k + 1) - 1, r, ell), ell);
  };
  auto coef_i0 = [&](int k, int r) {
    return mu ? binom_mod(k, r, ell)
              : fp_mul(fp_sign(r, ell), binom_mod((ell - 1LL) * k, r, ell), ell);
  };
  for (size_t g = 0; g < M.gens.size(); ++g) {
    int i = M.gens[g].i, k = M.gens[g].k;
    // beta
    if (i == 1) {
      int tg = M.find_band_gen(0, k + 1);
      if (tg >= 0) {
        ModElem e;
        e.add(pr, tg, HPoly::one());
        M.table[{0, static_cast<int>(g)}] = e;
      }
    }
    // P^r for table r >= 1
    for (int r = 1; r < M.nops(); ++r) {
      int c = i == 1 ? coef_i1(k, r) : coef_i0(k, r);
      if (c == 0) continue;
      int kk = mu ? (ell - 1) * r + k : r + k;
      int tg = M.find_band_gen(i, kk);
      if (tg < 0) continue;  // out of band: truncate
      ModElem e;
      e.add(pr, tg, hp_scale(pr, HPoly::one(), c));
      M.table[{r, static_cast<int>(g)}] = e;
    }
  }
  return M;
}

}  // namespace detail

inline FPModule bmu_band(Profile pr, int env, int kmin, int kmax) {
  if (kmin > kmax) throw std::invalid_argument("bmu_band: empty band");
  return detail::band_module(pr, env, FPModule::BMu, kmin, kmax);
}

inline FPModule bsigma_band(Profile pr, int env, int kmin, int kmax) {
  if (kmin > kmax) throw std::invalid_argument("bsigma_band: empty band");
  return detail::band_module(pr, env, FPModule::BSigma, kmin, kmax);
}

// H(L) for the stunted lens space with m negative Euler-class twists:
// free H-basis {u^i v^k : i in {0,1}, -m <= k < n - m}.
inline FPModule lens_module(Profile pr, int env, int m, int n) {
  if (m < 0 || n < 1) throw std::invalid_argument("lens_module: need m >= 0, n >= 1");
  FPModule M = detail::band_module(pr, env, FPModule::BMu, -m, n - m - 1);
  M.kind = FPModule::Lens;
  return M;
}

// Suspension Sigma^{p0,q0}: shift bidegrees; odd-degree operations pick up
// (-1)^{p0} (beta is the only odd table operation).
inline FPModule suspend(const FPModule& M, int p0, int q0) {
  FPModule S = M;
  S.act_cache.clear();
  S.sp += p0;
  S.sq += q0;
  for (auto& g : S.gens) {
    g.p += p0;
    g.q += q0;
  }
  if (M.pr.ell != 2 && (p0 % 2)) {
    for (auto& [key, e] : S.table)
      if (key.first == 0) {
        ModElem neg;
        neg.add(M.pr, e, -1);
        e = neg;
      }
  }
  return S;
}

// ---------------------------------------------------------------------------
// Module homomorphisms and towers

struct ModHom {
  const FPModule* src = nullptr;
  const FPModule* dst = nullptr;
  std::vector<ModElem> images;  // per source generator

  ModElem apply(const ModElem& x) const {
    ModElem out;
    for (auto& [g, h] : x.ts) out.add_scaled(dst->pr, images[g], h);
    return out;
  }
};

// Check A(env)-linearity of a homomorphism on all table ops and generators.
inline bool hom_is_linear(const ModHom& f) {
  for (int op = 0; op < f.src->nops(); ++op)
    for (size_t g = 0; g < f.src->gens.size(); ++g) {
      Mono m = detail::table_op_mono(op);
      ModElem lhs = f.apply(f.src->table_at(op, static_cast<int>(g)));
      ModElem rhs = detail::act_sym(*f.dst, m, f.images[g]);
      if (!(lhs == rhs)) return false;
    }
  return true;
}

// j*: lens(m, n) -> lens(m+1, n), identity on the absolute labels u^i v^k;
// classes whose label leaves the target band map to zero.
inline ModHom jstar_hom(const FPModule& from, const FPModule& to) {
  ModHom f;
  f.src = &from;
  f.dst = &to;
  for (auto& g : from.gens) {
    int tg = to.find_band_gen(g.i, g.k);
    ModElem e;
    if (tg >= 0) e.add(to.pr, tg, HPoly::one());
    f.images.push_back(e);
  }
  return f;
}

inline ModElem jstar(const FPModule& from, const FPModule& to, const ModElem& x) {
  return jstar_hom(from, to).apply(x);
}

struct Tower {
  std::vector<FPModule> levels;
  // maps[i] : levels[i] -> levels[i+1], stored as generator images
  std::vector<std::vector<ModElem>> maps;

  ModHom hom(size_t i) const {
    ModHom f;
    f.src = &levels[i];
    f.dst = &levels[i + 1];
    f.images = maps[i];
    return f;
  }
};

inline Tower lens_tower(Profile pr, int env, int m0, int m1, int n) {
  Tower T;
  for (int m = m0; m <= m1; ++m) T.levels.push_back(lens_module(pr, env, m, n));
  for (int m = m0; m < m1; ++m)
    T.maps.push_back(jstar_hom(T.levels[m - m0], T.levels[m - m0 + 1]).images);
  return T;
}

struct Window {
  long long pmin, pmax;  // cohomological p-range on generator bidegrees
};

// Colimit over the tower inside a window: the maps must be bijective on
// generators with p in the window from some level on; returns the top level.
inline FPModule tower_colim(const Tower& T, Window w) {
  if (T.levels.empty()) throw std::invalid_argument("tower_colim: empty tower");
  if (T.levels.size() == 1) return T.levels.back();
  ModHom f = T.hom(T.levels.size() - 2);
  // bijectivity on the window part: every window generator of dst is hit by
  // exactly one window generator of src, and no window generator maps to 0
  std::map<int, int> hits;
  for (size_t g = 0; g < f.src->gens.size(); ++g) {
    if (f.src->gens[g].p < w.pmin || f.src->gens[g].p > w.pmax) continue;
    const ModElem& im = f.images[g];
    if (im.ts.size() != 1 || !(im.ts.begin()->second == HPoly::one()))
      throw std::runtime_error("tower_colim: window does not stabilize");
    hits[im.ts.begin()->first] += 1;
  }
  for (size_t g = 0; g < f.dst->gens.size(); ++g)
    if (f.dst->gens[g].p >= w.pmin && f.dst->gens[g].p <= w.pmax)
      if (hits[static_cast<int>(g)] != 1)
        throw std::runtime_error("tower_colim: window does not stabilize");
  return T.levels.back();
}

// ---------------------------------------------------------------------------
// Residue, Frobenius form, projection, inclusion

// res on a once-suspended band: the coefficient of Sigma u v^{-1} (resp.
// Sigma c d^{-1}).
inline HElem residue(const FPModule& M, const ModElem& x) {
  if (M.sp != 1 || M.sq != 0 || (M.kind != FPModule::BMu && M.kind != FPModule::BSigma))
    throw std::invalid_argument("residue: need a Sigma-suspended band module");
  if (M.kmin > -1 || M.kmax < -1)
    throw std::invalid_argument("residue: band must contain k = -1");
  int g = M.find_band_gen(1, -1);
  auto it = x.ts.find(g);
  return it == x.ts.end() ? HElem(M.pr) : HElem::from_poly(M.pr, it->second);
}

// The Frobenius form's adjoint: Sigma v^k |-> (u v^{-k-1})^v,
// Sigma u v^{k-1} |-> (v^{-k})^v + rho (u v^{-k})^v (same shape for c, d).
// Dual basis vectors are returned as name -> coefficient.
inline std::map<std::string, HPoly> frobenius_adjoint(const FPModule& M,
                                                      const ModElem& x) {
  if (M.sp != 1 || (M.kind != FPModule::BMu && M.kind != FPModule::BSigma))
    throw std::invalid_argument("frobenius_adjoint: need a suspended band module");
  auto dual_name = [&](int i, int k) {
    bool mu = M.kind == FPModule::BMu;
    const char* un = mu ? "u" : "c";
    const char* vn = mu ? "v" : "d";
    return (i ? std::string(un) + "*" : std::string()) + vn + "^" +
           std::to_string(k);
  };
  std::map<std::string, HPoly> out;
  auto acc = [&](const std::string& nm, const HPoly& h) {
    if (h.zero()) return;
    HPoly& slot = out[nm];
    slot.add(M.pr, h);
    if (slot.zero()) out.erase(nm);
  };
  for (auto& [g, h] : x.ts) {
    int i = M.gens[g].i, k = M.gens[g].k;
    if (i == 0) {
      acc(dual_name(1, -k - 1), h);
    } else {
      // source label u v^{k}; displayed with k' = k + 1: target (v^{-k'})^v +
      // rho (u v^{-k'})^v
      int kp = k + 1;
      acc(dual_name(0, -kp), h);
      acc(dual_name(1, -kp), hp_mul(M.pr, h, HPoly::mono(M.pr, 1, 0)));
    }
  }
  return out;
}

// pi: Sigma bmu -> Sigma bsigma;  Sigma v^{(l-1)k} |-> (-1)^k Sigma d^k,
// Sigma u v^{(l-1)k-1} |-> (-1)^k Sigma c d^{k-1}, all other basis vectors to 0.
inline ModElem pi_projection(const FPModule& from, const FPModule& to,
                             const ModElem& x) {
  if (from.kind != FPModule::BMu || to.kind != FPModule::BSigma)
    throw std::invalid_argument("pi_projection: bmu -> bsigma bands required");
  int ell = from.pr.ell;
  ModElem out;
  for (auto& [g, h] : x.ts) {
    int i = from.gens[g].i, k = from.gens[g].k;
    if (i == 0) {
      if (k % (ell - 1)) continue;
      int kk = k / (ell - 1);
      int tg = to.find_band_gen(0, kk);
      if (tg < 0) continue;
      out.add(to.pr, tg, hp_scale(to.pr, h, fp_sign(kk, ell)));
    } else {
      if ((k + 1) % (ell - 1)) continue;
      int kk = (k + 1) / (ell - 1);
      int tg = to.find_band_gen(1, kk - 1);
      if (tg < 0) continue;
      out.add(to.pr, tg, hp_scale(to.pr, h, fp_sign(kk, ell)));
    }
  }
  return out;
}

// p_zeta^*: bsigma -> bmu, the algebra map c |-> -u v^{l-2}, d |-> -v^{l-1}.
inline ModElem psigma_inclusion(const FPModule& from, const FPModule& to,
                                const ModElem& x) {
  if (from.kind != FPModule::BSigma || to.kind != FPModule::BMu)
    throw std::invalid_argument("psigma_inclusion: bsigma -> bmu bands required");
  int ell = from.pr.ell;
  ModElem out;
  for (auto& [g, h] : x.ts) {
    int i = from.gens[g].i, k = from.gens[g].k;
    // c^i d^k |-> (-1)^{i+k} u^i v^{(l-2)i + (l-1)k}
    int kk = (ell - 2) * i + (ell - 1) * k;
    int tg = to.find_band_gen(i, kk);
    if (tg < 0) throw std::runtime_error("psigma_inclusion: band overflow");
    out.add(to.pr, tg, hp_scale(to.pr, h, fp_sign(i + k, ell)));
  }
  return out;
}

}  // namespace msing

#endif  // MSING_AMOD_HPP
