#ifndef MSING_DUALALG_HPP
#define MSING_DUALALG_HPP

// The dual motivic Steenrod algebra A_{*,*} = H_{*,*}[tau_0, tau_1, ...,
// xi_1, xi_2, ...]/(tau_i^2 - T_i), its quotient Hopf algebroids A(n)_{*,*},
// the bicomodule algebras C(n)_{*,*} = A_{*,*}/J(n) and localizations
// B(n)_{*,*} = C(n)_{*,*}[1/xi_1], with full structure: product, units,
// counit, coproduct, conjugation, left/right coactions, and the left<->right
// H-basis conversion along the descending topological-degree filtration.
//
// Monomials tau^E xi^R are a basis both as a free left and free right
// H_{*,*}-module; elements are stored left-normal (coefficients on the left).
// Koszul signs use topological-degree parity only.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "coeff.hpp"
#include "fp.hpp"

namespace msing {

// ---------------------------------------------------------------------------
// Monomials tau^E xi^R

struct Mono {
  uint32_t E = 0;       // bit i set <=> tau_i present
  std::vector<int> R;   // R[s-1] = exponent of xi_s (trailing zeros trimmed)

  void trim() {
    while (!R.empty() && R.back() == 0) R.pop_back();
  }
  bool is_one() const { return E == 0 && R.empty(); }
  int r(int s) const {  // exponent of xi_s, 1-based
    return (s >= 1 && s <= static_cast<int>(R.size())) ? R[s - 1] : 0;
  }
  void set_r(int s, int v) {
    if (static_cast<int>(R.size()) < s) R.resize(s, 0);
    R[s - 1] = v;
    trim();
  }
  bool operator==(const Mono& o) const { return E == o.E && R == o.R; }
  bool operator<(const Mono& o) const {
    if (E != o.E) return E < o.E;
    return R < o.R;
  }
};

inline long long mono_deg(const Mono& m, int ell) {
  long long d = 0;
  for (int i = 0; i < 31; ++i)
    if (m.E >> i & 1) d += 2 * ipow(ell, i) - 1;
  for (size_t s = 1; s <= m.R.size(); ++s)
    d += static_cast<long long>(m.R[s - 1]) * (2 * ipow(ell, s) - 2);
  return d;
}

inline long long mono_wt(const Mono& m, int ell) {
  long long w = 0;
  for (int i = 0; i < 31; ++i)
    if (m.E >> i & 1) w += ipow(ell, i) - 1;
  for (size_t s = 1; s <= m.R.size(); ++s)
    w += static_cast<long long>(m.R[s - 1]) * (ipow(ell, s) - 1);
  return w;
}

inline int mono_ecount(const Mono& m) { return __builtin_popcount(m.E); }

// ---------------------------------------------------------------------------
// Ambient algebra tags

struct AlgTag {
  enum Kind { Full, An, Cn, Bn } kind = Full;
  int n = -1;  // meaningful for An/Cn/Bn; An(-1) = H

  static AlgTag full() { return {Full, -1}; }
  static AlgTag an(int n) { return {An, n}; }
  static AlgTag cn(int n) { return {Cn, n}; }
  static AlgTag bn(int n) { return {Bn, n}; }
  bool operator==(const AlgTag& o) const { return kind == o.kind && n == o.n; }
};

// Is the monomial in the distinguished H-basis of the tagged algebra?
inline bool mono_admissible(const AlgTag& tag, const Mono& m, int ell) {
  switch (tag.kind) {
    case AlgTag::Full:
      for (int v : m.R)
        if (v < 0) return false;
      return true;
    case AlgTag::An: {
      if (tag.n < 0) return m.is_one();
      if (m.E >> (tag.n + 1)) return false;
      if (static_cast<int>(m.R.size()) > tag.n) return false;
      for (int s = 1; s <= static_cast<int>(m.R.size()); ++s)
        if (m.R[s - 1] < 0 || m.R[s - 1] >= ipow(ell, tag.n + 1 - s)) return false;
      return true;
    }
    case AlgTag::Cn:
    case AlgTag::Bn: {
      if (tag.n < 0) return false;
      if (m.E >> (tag.n + 1)) return false;
      int rmax = std::max(tag.n, 1);
      if (static_cast<int>(m.R.size()) > rmax) return false;
      if (m.r(1) < 0 && tag.kind == AlgTag::Cn) return false;
      for (int s = 2; s <= static_cast<int>(m.R.size()); ++s)
        if (m.R[s - 1] < 0 || m.R[s - 1] >= ipow(ell, tag.n + 1 - s)) return false;
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Elements: finite left-H-linear combinations of monomials

struct DualElem {
  Profile pr;
  AlgTag tag;
  std::map<Mono, HPoly> ts;

  DualElem() = default;
  DualElem(Profile p, AlgTag t) : pr(p), tag(t) {}

  bool zero() const { return ts.empty(); }
  void add(const Mono& m, const HPoly& h) {
    if (h.zero()) return;
    HPoly& slot = ts[m];
    slot.add(pr, h);
    if (slot.zero()) ts.erase(m);
  }
  void add(const DualElem& o, int scale = 1) {
    for (auto& [m, h] : o.ts) add(m, hp_scale(pr, h, scale));
  }
  void add_scaled(const DualElem& o, const HPoly& h) {
    for (auto& [m, c] : o.ts) add(m, hp_mul(pr, h, c));
  }
  bool operator==(const DualElem& o) const { return ts == o.ts; }

  static DualElem zero_elem(Profile p, AlgTag t) { return DualElem(p, t); }
  static DualElem monomial(Profile p, AlgTag t, const Mono& m, HPoly h = HPoly::one()) {
    DualElem e(p, t);
    Mono mm = m;
    mm.trim();
    if (mono_admissible(t, mm, p.ell)) e.add(mm, h);
    return e;
  }
  static DualElem unit(Profile p, AlgTag t) { return monomial(p, t, Mono{}); }
  static DualElem tau(Profile p, AlgTag t, int i) {
    Mono m;
    m.E = 1u << i;
    return monomial(p, t, m);
  }
  static DualElem xi(Profile p, AlgTag t, int s, int e = 1) {
    Mono m;
    m.set_r(s, e);
    return monomial(p, t, m);
  }
};

// ---------------------------------------------------------------------------
// Product.  tau_i^2 rewrites to T_i = tau xi_{i+1} + rho tau_{i+1} +
// rho tau_0 xi_{i+1} (ell = 2; profile-specialized), 0 for ell odd.
// Rewriting strictly decreases the total tau-count, hence terminates.

namespace detail {

inline void reduce_taus(const Profile& pr, std::vector<int> ec, std::vector<int> R,
                        HPoly coef, std::map<Mono, HPoly>& out) {
  int i = -1;
  for (size_t k = 0; k < ec.size(); ++k)
    if (ec[k] >= 2) {
      i = static_cast<int>(k);
      break;
    }
  if (i < 0) {
    Mono m;
    for (size_t k = 0; k < ec.size(); ++k)
      if (ec[k]) m.E |= 1u << k;
    m.R = std::move(R);
    m.trim();
    HPoly& slot = out[m];
    slot.add(pr, coef);
    if (slot.zero()) out.erase(m);
    return;
  }
  ec[i] -= 2;
  if (pr.ell != 2 || pr.kind == ProfileKind::Trivial) return;  // T_i = 0
  {  // tau * xi_{i+1}
    auto R2 = R;
    if (static_cast<int>(R2.size()) <= i) R2.resize(i + 1, 0);
    R2[i] += 1;
    reduce_taus(pr, ec, R2, hp_mul(pr, coef, HPoly::mono(pr, 0, 1)), out);
  }
  if (pr.kind == ProfileKind::Real) {
    {  // rho * tau_{i+1}
      auto e2 = ec;
      if (static_cast<int>(e2.size()) <= i + 1) e2.resize(i + 2, 0);
      e2[i + 1] += 1;
      reduce_taus(pr, e2, R, hp_mul(pr, coef, HPoly::mono(pr, 1, 0)), out);
    }
    {  // rho * tau_0 xi_{i+1}
      auto e2 = ec;
      if (e2.empty()) e2.resize(1, 0);
      e2[0] += 1;
      auto R2 = R;
      if (static_cast<int>(R2.size()) <= i) R2.resize(i + 1, 0);
      R2[i] += 1;
      reduce_taus(pr, e2, R2, hp_mul(pr, coef, HPoly::mono(pr, 1, 0)), out);
    }
  }
}

// Koszul sign from interleaving the tau-factors of m2 into those of m1
// (only the parity of the topological degree matters; tau_i are odd, xi_s
// even, so only tau-inversions contribute — relevant for ell odd only).
inline int tau_inversions(uint32_t E1, uint32_t E2) {
  int inv = 0;
  for (int i = 0; i < 31; ++i)
    if (E1 >> i & 1) inv += __builtin_popcount(E2 & ((1u << i) - 1));
  return inv;
}

}  // namespace detail

// Product of two monomials in the full dual algebra (r_1 in Z allowed),
// before any quotient projection.
inline std::map<Mono, HPoly> mul_monos(const Profile& pr, const Mono& m1,
                                       const Mono& m2) {
  std::map<Mono, HPoly> out;
  int sign = 1;
  if (pr.ell != 2) {
    if (m1.E & m2.E) return out;  // odd generators square to zero
    sign = detail::tau_inversions(m1.E, m2.E) % 2 ? pr.ell - 1 : 1;
  }
  size_t nr = std::max(m1.R.size(), m2.R.size());
  std::vector<int> R(nr, 0);
  for (size_t s = 0; s < nr; ++s)
    R[s] = (s < m1.R.size() ? m1.R[s] : 0) + (s < m2.R.size() ? m2.R[s] : 0);
  int emax = 0;
  for (int i = 0; i < 31; ++i)
    if ((m1.E | m2.E) >> i & 1) emax = i + 1;
  std::vector<int> ec(emax, 0);
  for (int i = 0; i < emax; ++i) ec[i] = (m1.E >> i & 1) + (m2.E >> i & 1);
  detail::reduce_taus(pr, std::move(ec), std::move(R),
                      hp_scale(pr, HPoly::one(), sign), out);
  return out;
}

inline DualElem mul(const DualElem& x, const DualElem& y) {
  if (!(x.tag == y.tag)) throw std::invalid_argument("mul: tag mismatch");
  if (!(x.pr == y.pr)) throw std::invalid_argument("mul: profile mismatch");
  DualElem r(x.pr, x.tag);
  for (auto& [m1, h1] : x.ts)
    for (auto& [m2, h2] : y.ts) {
      HPoly h = hp_mul(x.pr, h1, h2);
      if (h.zero()) continue;
      for (auto& [m, c] : mul_monos(x.pr, m1, m2)) {
        if (!mono_admissible(x.tag, m, x.pr.ell)) continue;  // quotient kills
        r.add(m, hp_mul(x.pr, h, c));
      }
    }
  return r;
}

inline DualElem mul_pow(const DualElem& x, int e) {
  DualElem r = DualElem::unit(x.pr, x.tag);
  DualElem base = x;
  if (e < 0) throw std::invalid_argument("mul_pow: negative exponent");
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Units and counit

// eta_R on one coefficient monomial: rho^a (tau + rho tau_0)^b, expressed in
// the left-normal form of the tagged algebra.
inline DualElem eta_right_mono(const Profile& pr, const AlgTag& tag, HMono hm,
                               int c) {
  DualElem base(pr, tag);
  base.add(Mono{}, HPoly::mono(pr, 0, 1));  // tau * 1
  if (pr.kind == ProfileKind::Real) {
    Mono t0;
    t0.E = 1;
    base.add(t0, HPoly::mono(pr, 1, 0));  // rho * tau_0
  }
  DualElem r = mul_pow(base, hm.b);
  DualElem out(pr, tag);
  out.add_scaled(r, HPoly::mono(pr, hm.a, 0, c));
  return out;
}

inline DualElem eta_right(const Profile& pr, const AlgTag& tag, const HPoly& h) {
  DualElem out(pr, tag);
  for (auto& [m, c] : h.ts) out.add(eta_right_mono(pr, tag, m, c));
  return out;
}

inline DualElem eta_right(const HElem& h, AlgTag tag = AlgTag::full()) {
  return eta_right(h.profile(), tag, h.poly());
}

inline HPoly counit_poly(const DualElem& x) {
  auto it = x.ts.find(Mono{});
  return it == x.ts.end() ? HPoly{} : it->second;
}

inline HElem counit(const DualElem& x) {
  return HElem::from_poly(x.pr, counit_poly(x));
}

// ---------------------------------------------------------------------------
// Left -> right H-basis conversion.  eta_L == eta_R mod F^1 (the descending
// topological-degree filtration), so peeling terms of minimal degree and
// subtracting m * eta_R(h) converges: the residue lives in strictly higher
// degree, and in a fixed bidegree the rho-exponent is bounded by
// a + 2b + #E = t - 2u, so the loop terminates.

inline std::vector<std::pair<Mono, HPoly>> to_right_basis(const DualElem& x) {
  DualElem rem = x;
  std::map<Mono, HPoly> out;
  int guard = 0;
  while (!rem.ts.empty()) {
    if (++guard > 100000) throw std::runtime_error("to_right_basis: no convergence");
    long long dmin = mono_deg(rem.ts.begin()->first, rem.pr.ell);
    std::vector<std::pair<Mono, HPoly>> lead;
    for (auto& [m, h] : rem.ts) {
      long long d = mono_deg(m, rem.pr.ell);
      if (d < dmin) {
        dmin = d;
        lead.clear();
      }
      if (d == dmin) lead.push_back({m, h});
    }
    for (auto& [m, h] : lead) {
      HPoly& slot = out[m];
      slot.add(rem.pr, h);
      if (slot.zero()) out.erase(m);
      DualElem me = DualElem::monomial(rem.pr, rem.tag, m);
      rem.add(mul(me, eta_right(rem.pr, rem.tag, h)), -1);
    }
  }
  return {out.begin(), out.end()};
}

// Inverse direction: assemble sum m_i * eta_R(h_i) in left-normal form.
inline DualElem from_right_basis(const Profile& pr, const AlgTag& tag,
                                 const std::vector<std::pair<Mono, HPoly>>& rb) {
  DualElem out(pr, tag);
  for (auto& [m, h] : rb)
    out.add(mul(DualElem::monomial(pr, tag, m), eta_right(pr, tag, h)));
  return out;
}

// ---------------------------------------------------------------------------
// Tensor elements of X (x)_H Y: normal form sum of mL (x) h * mR, with the
// left factor expanded in its right-H basis (x * eta_R(h) (x) y =
// x (x) eta_L(h) y is definitional in this form).

struct Tensor {
  Profile pr;
  AlgTag tagL, tagR;
  std::map<std::pair<Mono, Mono>, HPoly> ts;

  Tensor() = default;
  Tensor(Profile p, AlgTag l, AlgTag r) : pr(p), tagL(l), tagR(r) {}

  bool zero() const { return ts.empty(); }
  void add_term(const Mono& mL, const Mono& mR, const HPoly& h) {
    if (h.zero()) return;
    if (!mono_admissible(tagL, mL, pr.ell) || !mono_admissible(tagR, mR, pr.ell))
      return;
    HPoly& slot = ts[{mL, mR}];
    slot.add(pr, h);
    if (slot.zero()) ts.erase({mL, mR});
  }
  // Accumulate L (x) h*mR where L is a left-normal element of the left factor.
  void add_raw(const DualElem& L, const HPoly& h, const Mono& mR) {
    if (h.zero() || L.zero()) return;
    for (auto& [mL, hL] : to_right_basis(L))
      add_term(mL, mR, hp_mul(pr, hL, h));
  }
  void add(const Tensor& o, int scale = 1) {
    for (auto& [mm, h] : o.ts) add_term(mm.first, mm.second, hp_scale(pr, h, scale));
  }
  bool operator==(const Tensor& o) const { return ts == o.ts; }

  static Tensor unit(Profile p, AlgTag l, AlgTag r) {
    Tensor t(p, l, r);
    t.add_term(Mono{}, Mono{}, HPoly::one());
    return t;
  }
};

// (x1 (x) y1)(x2 (x) y2) = (-1)^{|y1||x2|} x1 x2 (x) y1 y2, parity by
// topological degree only.
inline Tensor tensor_mul(const Tensor& a, const Tensor& b) {
  Tensor out(a.pr, a.tagL, a.tagR);
  for (auto& [mmA, hA] : a.ts)
    for (auto& [mmB, hB] : b.ts) {
      int sign = 1;
      if (a.pr.ell != 2 &&
          (mono_deg(mmA.second, a.pr.ell) * mono_deg(mmB.first, a.pr.ell)) % 2)
        sign = a.pr.ell - 1;
      DualElem L = mul(DualElem::monomial(a.pr, a.tagL, mmA.first),
                       DualElem::monomial(a.pr, a.tagL, mmB.first));
      DualElem Rr = mul(DualElem::monomial(a.pr, a.tagR, mmA.second),
                        DualElem::monomial(a.pr, a.tagR, mmB.second));
      HPoly h = hp_scale(a.pr, hp_mul(a.pr, hA, hB), sign);
      for (auto& [mR, hR] : Rr.ts) out.add_raw(L, hp_mul(a.pr, h, hR), mR);
    }
  return out;
}

// Multiply the left factor by eta_L(h): renormalizes via the right basis.
inline Tensor tensor_scale_left(const Tensor& t, const HPoly& h) {
  Tensor out(t.pr, t.tagL, t.tagR);
  for (auto& [mm, hR] : t.ts) {
    DualElem L(t.pr, t.tagL);
    L.add(mm.first, h);
    out.add_raw(L, hR, mm.second);
  }
  return out;
}

// Project both factors to (possibly) smaller tags, basis-wise.
inline Tensor tensor_project(const Tensor& t, AlgTag newL, AlgTag newR) {
  Tensor out(t.pr, newL, newR);
  for (auto& [mm, h] : t.ts) out.add_term(mm.first, mm.second, h);
  return out;
}

// ---------------------------------------------------------------------------
// Coproduct.  psi(tau_k) = tau_k (x) 1 + sum_{i+j=k} xi_i^{ell^j} (x) tau_j,
// psi(xi_k) = sum_{i+j=k} xi_i^{ell^j} (x) xi_j, extended multiplicatively.

namespace detail {

struct PsiKey {
  int ell;
  ProfileKind kind;
  Mono m;
  bool operator<(const PsiKey& o) const {
    return std::tie(ell, kind, m) < std::tie(o.ell, o.kind, o.m);
  }
};

inline Tensor psi_tau_gen(const Profile& pr, int k) {
  Tensor t(pr, AlgTag::full(), AlgTag::full());
  Mono tk;
  tk.E = 1u << k;
  t.add_term(tk, Mono{}, HPoly::one());
  for (int i = 0; i <= k; ++i) {
    int j = k - i;
    Mono xl;  // xi_i^{ell^j} (xi_0 = 1)
    if (i > 0) xl.set_r(i, static_cast<int>(ipow(pr.ell, j)));
    Mono tr;
    tr.E = 1u << j;
    t.add_term(xl, tr, HPoly::one());
  }
  return t;
}

inline Tensor psi_xi_gen(const Profile& pr, int k) {
  Tensor t(pr, AlgTag::full(), AlgTag::full());
  for (int i = 0; i <= k; ++i) {
    int j = k - i;
    Mono xl;
    if (i > 0) xl.set_r(i, static_cast<int>(ipow(pr.ell, j)));
    Mono xr;
    if (j > 0) xr.set_r(j, 1);
    t.add_term(xl, xr, HPoly::one());
  }
  return t;
}

inline Tensor tensor_pow(const Tensor& t, int e) {
  Tensor r = Tensor::unit(t.pr, t.tagL, t.tagR);
  Tensor base = t;
  while (e) {
    if (e & 1) r = tensor_mul(r, base);
    base = tensor_mul(base, base);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

// Coproduct of a monomial in the full dual algebra (memoized).
inline const Tensor& psi_full_mono(const Profile& pr, const Mono& m) {
  static std::map<detail::PsiKey, Tensor> cache;
  detail::PsiKey key{pr.ell, pr.kind, m};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  Tensor t = Tensor::unit(pr, AlgTag::full(), AlgTag::full());
  for (int i = 0; i < 31; ++i)
    if (m.E >> i & 1) t = tensor_mul(t, detail::psi_tau_gen(pr, i));
  for (int s = 1; s <= static_cast<int>(m.R.size()); ++s)
    if (m.R[s - 1] > 0)
      t = tensor_mul(t, detail::tensor_pow(detail::psi_xi_gen(pr, s), m.R[s - 1]));
  return cache.emplace(key, std::move(t)).first->second;
}

// Coproduct on the full dual algebra or a quotient A(n)_{*,*}
// (psi_n pi_n = (pi_n (x) pi_n) psi).
inline Tensor coproduct(const DualElem& x) {
  if (x.tag.kind != AlgTag::Full && x.tag.kind != AlgTag::An)
    throw std::invalid_argument("coproduct: tag must be full or A(n)");
  Tensor out(x.pr, x.tag, x.tag);
  for (auto& [m, h] : x.ts) {
    Tensor t = tensor_project(psi_full_mono(x.pr, m), x.tag, x.tag);
    out.add(tensor_scale_left(t, h));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conjugation chi, by the recursions
//   tau_k + sum_{i+j=k} xi_i^{ell^j} chi(tau_j) = 0,
//   sum_{i+j=k} xi_i^{ell^j} chi(xi_j) = 0   (xi_0 = 1),
// extended as an algebra map (commutative, so no anti-map bookkeeping)
// with chi eta_L = eta_R on coefficients.

namespace detail {

inline const DualElem& chi_gen(const Profile& pr, bool is_tau, int k);

inline DualElem chi_gen_compute(const Profile& pr, bool is_tau, int k) {
  AlgTag F = AlgTag::full();
  DualElem acc(pr, F);
  // acc = sum_{i=1..k} xi_i^{ell^{k-i}} chi(gen_{k-i});   chi(gen_k) =
  // -gen_k - acc  (for xi: chi(xi_k) = -xi_k - sum_{i=1..k-1} ...).
  for (int i = 1; i <= (is_tau ? k : k - 1); ++i) {
    int j = k - i;
    DualElem xl = DualElem::xi(pr, F, i, static_cast<int>(ipow(pr.ell, j)));
    acc.add(mul(xl, chi_gen(pr, is_tau, j)));
  }
  DualElem gen = is_tau ? DualElem::tau(pr, F, k) : DualElem::xi(pr, F, k);
  DualElem out(pr, F);
  out.add(gen, -1);
  out.add(acc, -1);
  return out;
}

inline const DualElem& chi_gen(const Profile& pr, bool is_tau, int k) {
  static std::map<std::tuple<int, ProfileKind, bool, int>, DualElem> cache;
  auto key = std::make_tuple(pr.ell, pr.kind, is_tau, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  DualElem v = (!is_tau && k == 0) ? DualElem::unit(pr, AlgTag::full())
                                   : chi_gen_compute(pr, is_tau, k);
  return cache.emplace(key, std::move(v)).first->second;
}

}  // namespace detail

inline DualElem conjugate(const DualElem& x) {
  if (x.tag.kind != AlgTag::Full && x.tag.kind != AlgTag::An)
    throw std::invalid_argument("conjugate: tag must be full or A(n)");
  AlgTag F = AlgTag::full();
  DualElem out(x.pr, x.tag);
  for (auto& [m, h] : x.ts) {
    DualElem prod = eta_right(x.pr, F, h);
    for (int i = 0; i < 31; ++i)
      if (m.E >> i & 1) prod = mul(prod, detail::chi_gen(x.pr, true, i));
    for (int s = 1; s <= static_cast<int>(m.R.size()); ++s)
      if (m.R[s - 1] > 0)
        prod = mul(prod, mul_pow(detail::chi_gen(x.pr, false, s), m.R[s - 1]));
    for (auto& [mm, hh] : prod.ts)
      if (mono_admissible(x.tag, mm, x.pr.ell)) out.add(mm, hh);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quotient projections along  A -> C(n) -> A(n)  /  C(n) -> B(n)

inline bool projection_allowed(const AlgTag& from, const AlgTag& to) {
  using K = AlgTag::Kind;
  if (from.kind == K::Full) return to.kind != K::Full || true;
  if (from.kind == K::An) return to.kind == K::An && to.n <= from.n;
  if (from.kind == K::Cn)
    return (to.kind == K::An && to.n == from.n) ||
           (to.kind == K::Cn && to.n <= from.n) ||
           (to.kind == K::Bn && to.n == from.n);
  if (from.kind == K::Bn) return to.kind == K::Bn && to.n <= from.n;
  return false;
}

inline DualElem project(const DualElem& x, AlgTag to) {
  if (!projection_allowed(x.tag, to))
    throw std::invalid_argument("project: no canonical map between tags");
  DualElem out(x.pr, to);
  for (auto& [m, h] : x.ts)
    if (mono_admissible(to, m, x.pr.ell)) out.add(m, h);
  return out;
}

// alpha_n: keep monomials with e_0 = ... = e_n = 0 and ell^{n+1-s} | r_s
// (1 <= s <= n); kill the rest.  (The X(n)-basis projection.)
inline DualElem xn_project(const DualElem& x, int n) {
  if (x.tag.kind != AlgTag::Full)
    throw std::invalid_argument("xn_project: tag must be full");
  DualElem out(x.pr, x.tag);
  for (auto& [m, h] : x.ts) {
    if (m.E & ((1u << (n + 1)) - 1)) continue;
    bool ok = true;
    for (int s = 1; s <= n; ++s)
      if (m.r(s) % ipow(x.pr.ell, n + 1 - s) != 0) ok = false;
    if (ok) out.add(m, h);
  }
  return out;
}

// Is the monomial in the X(n) basis (complementary divided-power part)?
inline bool mono_in_xn(const Profile& pr, const Mono& m, int n) {
  if (m.E & ((1u << (n + 1)) - 1)) return false;
  for (int s = 1; s <= n; ++s)
    if (m.r(s) % ipow(pr.ell, n + 1 - s) != 0) return false;
  for (int v : m.R)
    if (v < 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Coactions on C(n)_{*,*} and B(n)_{*,*}.
//   lambda_n = (pi_n (x) pi'_n) psi on a lift; xi_1^{ell^n} is a left
//   A(n)_{*,*}-comodule primitive, so negative xi_1-powers shift the right
//   factor.  rho_n = (pi'_n (x) pi_{n-1}) psi; xi_1^{-ell^n} |-> itself (x) 1.

namespace detail {

// Split x in B(n) as (lift with r_1 >= 0) * xi_1^{-j*ell^n}.
inline int bn_shift(const Profile& pr, int n, const Mono& m) {
  if (m.r(1) >= 0) return 0;
  long long p = ipow(pr.ell, n);
  return static_cast<int>((-m.r(1) + p - 1) / p);
}

}  // namespace detail

inline Tensor coact_left(const DualElem& x) {
  if (x.tag.kind != AlgTag::Cn && x.tag.kind != AlgTag::Bn)
    throw std::invalid_argument("coact_left: tag must be C(n) or B(n)");
  int n = x.tag.n;
  Tensor out(x.pr, AlgTag::an(n), x.tag);
  for (auto& [m, h] : x.ts) {
    int j = detail::bn_shift(x.pr, n, m);
    Mono lift = m;
    lift.set_r(1, m.r(1) + j * static_cast<int>(ipow(x.pr.ell, n)));
    Tensor t = tensor_project(psi_full_mono(x.pr, lift), AlgTag::an(n), x.tag);
    t = tensor_scale_left(t, h);
    if (j) {
      Tensor sh(x.pr, AlgTag::an(n), x.tag);
      for (auto& [mm, hh] : t.ts) {
        Mono mr = mm.second;
        mr.set_r(1, mr.r(1) - j * static_cast<int>(ipow(x.pr.ell, n)));
        sh.add_term(mm.first, mr, hh);
      }
      t = std::move(sh);
    }
    out.add(t);
  }
  return out;
}

inline Tensor coact_right(const DualElem& x) {
  if (x.tag.kind != AlgTag::Cn && x.tag.kind != AlgTag::Bn)
    throw std::invalid_argument("coact_right: tag must be C(n) or B(n)");
  int n = x.tag.n;
  Tensor out(x.pr, x.tag, AlgTag::an(n - 1));
  for (auto& [m, h] : x.ts) {
    int j = detail::bn_shift(x.pr, n, m);
    Mono lift = m;
    lift.set_r(1, m.r(1) + j * static_cast<int>(ipow(x.pr.ell, n)));
    Tensor t = tensor_project(psi_full_mono(x.pr, lift), x.tag, AlgTag::an(n - 1));
    t = tensor_scale_left(t, h);
    if (j) {
      // xi_1^{-ell^n} is right A(n-1)_{*,*}-comodule primitive: shift left.
      Tensor sh(x.pr, x.tag, AlgTag::an(n - 1));
      for (auto& [mm, hh] : t.ts) {
        Mono ml = mm.first;
        ml.set_r(1, ml.r(1) - j * static_cast<int>(ipow(x.pr.ell, n)));
        sh.add_term(ml, mm.second, hh);
      }
      t = std::move(sh);
    }
    out.add(t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Basis enumeration

namespace detail {

// Enumerate monomials of the tagged algebra with topological degree in
// [dmin, dmax]; for exact-bidegree queries the caller filters by weight.
inline void enum_monos_rec(const Profile& pr, const AlgTag& tag, long long dmin,
                           long long dmax, int smax, Mono cur, long long curdeg,
                           std::vector<Mono>& out) {
  if (smax == 0) {
    // choose E bits (indices bounded by tag / degree)
    int imax = 0;
    while (2 * ipow(pr.ell, imax) - 1 <= dmax - curdeg) ++imax;
    if (tag.kind != AlgTag::Full) imax = std::min<int>(imax, tag.n + 1);
    // iterate subsets of {0..imax-1}
    for (uint32_t E = 0;; ++E) {
      if (E >> imax) break;
      Mono m = cur;
      m.E = E;
      long long d = curdeg;
      for (int i = 0; i < imax; ++i)
        if (E >> i & 1) d += 2 * ipow(pr.ell, i) - 1;
      if (d >= dmin && d <= dmax && mono_admissible(tag, m, pr.ell))
        out.push_back(m);
    }
    return;
  }
  if (smax == 1) {
    long long step = 2 * ipow(pr.ell, 1) - 2;
    long long rlo = 0, rhi = 0;
    // remaining degree budget after E bits can only grow, so allow the full
    // band for r_1 here and let the E loop check bounds.
    long long slackE = 0;  // max E-contribution
    {
      int imax = 0;
      if (tag.kind == AlgTag::Bn)
        imax = tag.n + 1;
      else {
        while (2 * ipow(pr.ell, imax) - 1 <= dmax) ++imax;
        if (tag.kind != AlgTag::Full) imax = std::min<int>(imax, tag.n + 1);
      }
      for (int i = 0; i < imax; ++i) slackE += 2 * ipow(pr.ell, i) - 1;
    }
    if (tag.kind == AlgTag::Bn)
      rlo = -((-(dmin - curdeg - slackE) / step) + 2);
    rlo = std::min<long long>(rlo, 0);
    rhi = (dmax - curdeg) / step + 1;
    long long cap = (tag.kind == AlgTag::An) ? ipow(pr.ell, tag.n) : rhi + 1;
    for (long long r1 = rlo; r1 <= std::min(rhi, cap - 1); ++r1) {
      Mono m = cur;
      if (r1 != 0) m.set_r(1, static_cast<int>(r1));
      enum_monos_rec(pr, tag, dmin, dmax, 0, m, curdeg + r1 * step, out);
    }
    return;
  }
  long long step = 2 * ipow(pr.ell, smax) - 2;
  long long capq =
      (tag.kind == AlgTag::Full) ? (dmax - curdeg) / step : ipow(pr.ell, tag.n + 1 - smax) - 1;
  if (tag.kind != AlgTag::Full && smax > tag.n) capq = 0;
  // For B(n), degree overshoot in xi_s can be compensated by negative xi_1
  // powers, so only the exponent cap applies.
  for (long long rs = 0;
       rs <= capq && (tag.kind == AlgTag::Bn || curdeg + rs * step <= dmax); ++rs) {
    Mono m = cur;
    if (rs != 0) m.set_r(smax, static_cast<int>(rs));
    enum_monos_rec(pr, tag, dmin, dmax, smax - 1, m, curdeg + rs * step, out);
  }
}

}  // namespace detail

inline std::vector<Mono> monos_in_degree_band(const Profile& pr, const AlgTag& tag,
                                              long long dmin, long long dmax) {
  int smax = 1;
  while (2 * ipow(pr.ell, smax + 1) - 2 <= dmax) ++smax;
  if (tag.kind == AlgTag::Bn)
    smax = std::max(1, tag.n);  // high xi_s offset by negative xi_1 powers
  else if (tag.kind != AlgTag::Full)
    smax = std::max(1, std::min(smax, tag.n));
  std::vector<Mono> out;
  detail::enum_monos_rec(pr, tag, dmin, dmax, smax, Mono{}, 0, out);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Mono> monos_up_to_degree(const Profile& pr, const AlgTag& tag,
                                            long long dmax) {
  return monos_in_degree_band(pr, tag, 0, dmax);
}

inline std::vector<Mono> monos_of_bidegree(const Profile& pr, const AlgTag& tag,
                                           long long deg, long long wt) {
  std::vector<Mono> out;
  for (auto& m : monos_in_degree_band(pr, tag, deg, deg))
    if (mono_wt(m, pr.ell) == wt) out.push_back(m);
  return out;
}

// F_ell-basis of the tagged algebra in one homological bidegree (t, u):
// pairs (coefficient monomial rho^a tau^b, basis monomial m) with
// deg m = t + a, wt m = u + a + b.
inline std::vector<std::pair<HMono, Mono>> hbasis_homological(
    const Profile& pr, const AlgTag& tag, long long t, long long u) {
  std::vector<std::pair<HMono, Mono>> out;
  int amax = (pr.kind == ProfileKind::Real) ? 64 : 0;
  int bmax = (pr.kind == ProfileKind::Trivial) ? 0 : 64;
  // a + 2b + #E = t - 2u bounds the coefficient exponents
  long long abound = t - 2 * u;
  for (int a = 0; a <= amax && a <= abound; ++a)
    for (int b = 0; b <= bmax && a + 2 * b <= abound; ++b)
      for (auto& m : monos_of_bidegree(pr, tag, t + a, u + a + b))
        out.push_back({HMono{a, b}, m});
  return out;
}

}  // namespace msing

#endif  // MSING_DUALALG_HPP
