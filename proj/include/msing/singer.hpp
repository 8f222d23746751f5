#ifndef MSING_SINGER_HPP
#define MSING_SINGER_HPP

// The small and large Singer constructions over a module M:
//   R_S(M): elements sum h * (beta^e P^r (x) m), e in {0,1}, r in Z, stored in
//           the B(0) (x) M normal form (tensor over H, with the right
//           H-action on B(0) used to renormalize inner coefficients);
//   R_mu(M): elements sum h * (Sigma u^i v^k (x) m).
// Both carry beta and all P^a (a >= 0) by the closed action formulas; the
// evaluation maps, the identification with the localized classifying-space
// band, and the n-independent stabilization B(n) (x)_{A(n-1)} M -> R_S(M).

#include <map>
#include <stdexcept>
#include <tuple>

#include "amod.hpp"

namespace msing {

// ---------------------------------------------------------------------------
// Elements

struct SSElem {  // small construction: keys (e, r, generator of M)
  std::map<std::tuple<int, int, int>, HPoly> ts;
  bool zero() const { return ts.empty(); }
  void add(const Profile& pr, int e, int r, int g, const HPoly& h) {
    if (h.zero()) return;
    HPoly& slot = ts[{e, r, g}];
    slot.add(pr, h);
    if (slot.zero()) ts.erase({e, r, g});
  }
  void add(const Profile& pr, const SSElem& o, int scale = 1) {
    for (auto& [k, h] : o.ts)
      add(pr, std::get<0>(k), std::get<1>(k), std::get<2>(k), hp_scale(pr, h, scale));
  }
  bool operator==(const SSElem& o) const { return ts == o.ts; }
  static SSElem slot(int e, int r, int g = 0) {
    SSElem x;
    x.ts[{e, r, g}] = HPoly::one();
    return x;
  }
};

struct SLElem {  // large construction: keys (i, k, generator of M)
  std::map<std::tuple<int, int, int>, HPoly> ts;
  bool zero() const { return ts.empty(); }
  void add(const Profile& pr, int i, int k, int g, const HPoly& h) {
    if (h.zero()) return;
    HPoly& slot = ts[{i, k, g}];
    slot.add(pr, h);
    if (slot.zero()) ts.erase({i, k, g});
  }
  void add(const Profile& pr, const SLElem& o, int scale = 1) {
    for (auto& [k, h] : o.ts)
      add(pr, std::get<0>(k), std::get<1>(k), std::get<2>(k), hp_scale(pr, h, scale));
  }
  bool operator==(const SLElem& o) const { return ts == o.ts; }
  static SLElem slot(int i, int k, int g = 0) {
    SLElem x;
    x.ts[{i, k, g}] = HPoly::one();
    return x;
  }
};

// ---------------------------------------------------------------------------
// Normalization of inner coefficients

namespace detail {

// beta^e P^r (x) (h * m) = (beta^e P^r * h) (x) m, the right H-action on B(0)
// (trivial to the left for profiles without rho).
inline SSElem ss_tensor(const FPModule& M, const HPoly& outer, int e, int r,
                        const ModElem& inner) {
  const Profile& pr = M.pr;
  SSElem out;
  for (auto& [g, h] : inner.ts) {
    bool central = (pr.kind != ProfileKind::Real) ||
                   (h.ts.size() == 1 && h.ts.begin()->first == HMono{0, 0});
    if (central) {
      out.add(pr, e, r, g, hp_mul(pr, outer, h));
      continue;
    }
    MilnorElem moved = act_right(milnor_bP(pr, AlgTag::bn(0), e, r),
                                 MilnorElem::sym(pr, AlgTag::an(-1), Mono{}, h));
    for (auto& [m2, h2] : moved.ts)
      out.add(pr, static_cast<int>(m2.E & 1), m2.r(1), g, hp_mul(pr, outer, h2));
  }
  return out;
}

// Sigma u^i v^k lives in a commutative H-algebra, so inner coefficients pass
// through unchanged.
inline SLElem sl_tensor(const FPModule& M, const HPoly& outer, int i, int k,
                        const ModElem& inner) {
  SLElem out;
  for (auto& [g, h] : inner.ts) out.add(M.pr, i, k, g, hp_mul(M.pr, outer, h));
  return out;
}

inline MilnorElem inner_sq(const FPModule& M, int j) {
  return milnor_Sq(M.pr, AlgTag::an(M.env), j);
}
inline MilnorElem inner_bP(const FPModule& M, int e, int j) {
  return milnor_bP(M.pr, AlgTag::an(M.env), e, j);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Small construction: beta and P^a

inline SSElem rs_act_beta(const FPModule& M, const SSElem& x) {
  const Profile& pr = M.pr;
  SSElem out;
  for (auto& [key, h] : x.ts) {
    auto [e, r, g] = key;
    // beta(h y) = beta(h) y + h beta(y); beta(P^r (x) m) = beta P^r (x) m
    if (e == 0) out.add(pr, 1, r, g, h);
    HPoly bh = hp_beta(pr, h);
    if (!bh.zero()) out.add(pr, e, r, g, bh);
  }
  return out;
}

// P^a on one pure slot beta^e P^r (x) (generator g).
inline SSElem rs_act_P_slot(const FPModule& M, int a, int e, int r, int g) {
  const Profile& pr = M.pr;
  int ell = pr.ell;
  SSElem out;
  if (a == 0) return SSElem::slot(e, r, g);
  if (ell == 2) {
    int A = 2 * a, b = 2 * r + e;
    if (e == 0) {
      for (int j = 0; 2 * j <= A; ++j) {
        int c = binom_mod(b - 1 - j, A - 2 * j, 2);
        if (!c) continue;
        int s2 = A + b - j, e2 = s2 & 1;
        ModElem inner = act(M, detail::inner_sq(M, j), ModElem::gen(g));
        out.add(pr, detail::ss_tensor(M, HPoly::mono(pr, 0, j % 2, c), e2,
                                      (s2 - e2) / 2, inner));
      }
    } else {
      for (int j = 0; 2 * j <= A; ++j) {
        int c = binom_mod(b - 1 - j, A - 2 * j, 2);
        if (!c) continue;
        ModElem inner = act(M, detail::inner_sq(M, j), ModElem::gen(g));
        {
          int s2 = A + b - j, e2 = s2 & 1;
          out.add(pr, detail::ss_tensor(M, hp_scale(pr, HPoly::one(), c), e2,
                                        (s2 - e2) / 2, inner));
        }
        if (j % 2 == 1) {
          int s2 = A + b - j - 1, e2 = s2 & 1;
          out.add(pr, detail::ss_tensor(M, HPoly::mono(pr, 1, 0, c), e2,
                                        (s2 - e2) / 2, inner));
        }
      }
    }
  } else {
    int b = r;
    if (e == 0) {
      for (int j = 0; ell * j <= a; ++j) {
        int c = fp_mul(fp_sign(a + j, ell),
                       binom_mod((ell - 1LL) * (b - j) - 1, a - ell * j, ell), ell);
        if (!c) continue;
        ModElem inner = act(M, detail::inner_bP(M, 0, j), ModElem::gen(g));
        out.add(pr, detail::ss_tensor(M, hp_scale(pr, HPoly::one(), c), 0,
                                      a + b - j, inner));
      }
    } else {
      for (int j = 0; ell * j <= a; ++j) {
        int c = fp_mul(fp_sign(a + j, ell),
                       binom_mod((ell - 1LL) * (b - j), a - ell * j, ell), ell);
        if (c) {
          ModElem inner = act(M, detail::inner_bP(M, 0, j), ModElem::gen(g));
          out.add(pr, detail::ss_tensor(M, hp_scale(pr, HPoly::one(), c), 1,
                                        a + b - j, inner));
        }
      }
      for (int j = 0; ell * j <= a - 1; ++j) {
        int c = fp_mul(fp_sign(a + j - 1, ell),
                       binom_mod((ell - 1LL) * (b - j) - 1, a - ell * j - 1, ell),
                       ell);
        if (!c) continue;
        ModElem inner = act(M, detail::inner_bP(M, 1, j), ModElem::gen(g));
        out.add(pr, detail::ss_tensor(M, hp_scale(pr, HPoly::one(), c), 0,
                                      a + b - j, inner));
      }
    }
  }
  return out;
}

inline SSElem rs_act_P(const FPModule& M, int a, const SSElem& x) {
  if (a < 0) throw std::invalid_argument("rs_act_P: a must be >= 0");
  const Profile& pr = M.pr;
  SSElem out;
  for (auto& [key, h] : x.ts) {
    auto [e, r, g] = key;
    bool central = (pr.kind != ProfileKind::Real) ||
                   (h.ts.size() == 1 && h.ts.begin()->first == HMono{0, 0});
    if (central) {
      SSElem part = rs_act_P_slot(M, a, e, r, g);
      for (auto& [k2, h2] : part.ts)
        out.add(pr, std::get<0>(k2), std::get<1>(k2), std::get<2>(k2),
                hp_mul(pr, h, h2));
    } else {
      // commute the coefficient through P^a inside A(env)
      AlgTag an = AlgTag::an(M.env);
      MilnorElem prod = milnor_mul(milnor_P(pr, an, a),
                                   MilnorElem::sym(pr, an, Mono{}, h));
      for (auto& [m2, h2] : prod.ts) {
        // every symbol in P^a * h is of the form beta^{e'} P^{a'}
        if ((m2.E & ~1u) || static_cast<int>(m2.R.size()) > 1)
          throw std::runtime_error("rs_act_P: unexpected commutation symbol");
        SSElem part = SSElem::slot(e, r, g);
        if (m2.r(1) > 0) part = rs_act_P(M, m2.r(1), part);
        if (m2.E & 1) part = rs_act_beta(M, part);
        for (auto& [k2, h3] : part.ts)
          out.add(pr, std::get<0>(k2), std::get<1>(k2), std::get<2>(k2),
                  hp_mul(pr, h2, h3));
      }
    }
  }
  return out;
}

// Sq^k on the small construction (ell = 2 convenience).
inline SSElem rs_act_sq(const FPModule& M, int k, const SSElem& x) {
  if (M.pr.ell != 2) throw std::invalid_argument("rs_act_sq: ell must be 2");
  SSElem y = rs_act_P(M, k / 2, x);
  return (k % 2) ? rs_act_beta(M, y) : y;
}

// ---------------------------------------------------------------------------
// Large construction: beta and P^r

inline SLElem rmu_act_beta(const FPModule& M, const SLElem& x) {
  const Profile& pr = M.pr;
  SLElem out;
  for (auto& [key, h] : x.ts) {
    auto [i, k, g] = key;
    if (i == 1) out.add(pr, 0, k + 1, g, hp_scale(pr, h, -1));
    HPoly bh = hp_beta(pr, h);
    if (!bh.zero()) out.add(pr, i, k, g, bh);
  }
  return out;
}

inline SLElem rmu_act_P_slot(const FPModule& M, int r, int i, int K, int g) {
  const Profile& pr = M.pr;
  int ell = pr.ell;
  SLElem out;
  if (r == 0) return SLElem::slot(i, K, g);
  if (ell == 2) {
    if (i == 1) {
      for (int j = 0; 2 * j <= r; ++j) {
        int c = binom_mod(K - j, r - 2 * j, 2);
        if (c) {
          ModElem inner = act(M, detail::inner_sq(M, 2 * j), ModElem::gen(g));
          out.add(pr, detail::sl_tensor(M, hp_scale(pr, HPoly::one(), c), 1,
                                        r + K - j, inner));
        }
      }
      for (int j = 0; 2 * j <= r - 1; ++j) {
        int c = binom_mod(K - j, r - 2 * j - 1, 2);
        if (c) {
          ModElem inner = act(M, detail::inner_sq(M, 2 * j + 1), ModElem::gen(g));
          out.add(pr, detail::sl_tensor(M, HPoly::mono(pr, 0, 1, c), 0,
                                        r + K - j, inner));
        }
      }
    } else {
      for (int j = 0; 2 * j <= r; ++j) {
        int c = binom_mod(K - j, r - 2 * j, 2);
        if (c) {
          ModElem inner = act(M, detail::inner_sq(M, 2 * j), ModElem::gen(g));
          out.add(pr, detail::sl_tensor(M, hp_scale(pr, HPoly::one(), c), 0,
                                        r + K - j, inner));
        }
      }
      for (int j = 0; 2 * j <= r - 1; ++j) {
        int c = binom_mod(K - j - 1, r - 2 * j - 1, 2);
        if (c) {
          ModElem inner = act(M, detail::inner_sq(M, 2 * j + 1), ModElem::gen(g));
          out.add(pr, detail::sl_tensor(M, hp_scale(pr, HPoly::one(), c), 1,
                                        r + K - j - 1, inner));
          out.add(pr, detail::sl_tensor(M, HPoly::mono(pr, 1, 0, c), 0,
                                        r + K - j - 1, inner));
        }
      }
    }
  } else {
    if (i == 1) {
      int k = K + 1;  // source slot Sigma u v^{k-1}
      for (int j = 0; ell * j <= r; ++j) {
        int c = binom_mod(k - (ell - 1LL) * j - 1, r - ell * j, ell);
        if (!c) continue;
        ModElem inner = act(M, detail::inner_bP(M, 0, j), ModElem::gen(g));
        out.add(pr, detail::sl_tensor(M, hp_scale(pr, HPoly::one(), c), 1,
                                      k + (ell - 1) * (r - j) - 1, inner));
      }
    } else {
      int k = K;
      for (int j = 0; ell * j <= r; ++j) {
        int c = binom_mod(k - (ell - 1LL) * j, r - ell * j, ell);
        if (c) {
          ModElem inner = act(M, detail::inner_bP(M, 0, j), ModElem::gen(g));
          out.add(pr, detail::sl_tensor(M, hp_scale(pr, HPoly::one(), c), 0,
                                        k + (ell - 1) * (r - j), inner));
        }
      }
      for (int j = 0; ell * j <= r - 1; ++j) {
        int c = binom_mod(k - (ell - 1LL) * j - 1, r - ell * j - 1, ell);
        if (c) {
          ModElem inner = act(M, detail::inner_bP(M, 1, j), ModElem::gen(g));
          out.add(pr, detail::sl_tensor(M, hp_scale(pr, HPoly::one(), c), 1,
                                        k + (ell - 1) * (r - j) - 1, inner));
        }
      }
    }
  }
  return out;
}

inline SLElem rmu_act_P(const FPModule& M, int r, const SLElem& x) {
  if (r < 0) throw std::invalid_argument("rmu_act_P: r must be >= 0");
  const Profile& pr = M.pr;
  SLElem out;
  for (auto& [key, h] : x.ts) {
    auto [i, k, g] = key;
    bool central = (pr.kind != ProfileKind::Real) ||
                   (h.ts.size() == 1 && h.ts.begin()->first == HMono{0, 0});
    if (central) {
      SLElem part = rmu_act_P_slot(M, r, i, k, g);
      for (auto& [k2, h2] : part.ts)
        out.add(pr, std::get<0>(k2), std::get<1>(k2), std::get<2>(k2),
                hp_mul(pr, h, h2));
    } else {
      AlgTag an = AlgTag::an(M.env);
      MilnorElem prod = milnor_mul(milnor_P(pr, an, r),
                                   MilnorElem::sym(pr, an, Mono{}, h));
      for (auto& [m2, h2] : prod.ts) {
        if ((m2.E & ~1u) || static_cast<int>(m2.R.size()) > 1)
          throw std::runtime_error("rmu_act_P: unexpected commutation symbol");
        SLElem part = SLElem::slot(i, k, g);
        if (m2.r(1) > 0) part = rmu_act_P(M, m2.r(1), part);
        if (m2.E & 1) part = rmu_act_beta(M, part);
        for (auto& [k2, h3] : part.ts)
          out.add(pr, std::get<0>(k2), std::get<1>(k2), std::get<2>(k2),
                  hp_mul(pr, h2, h3));
      }
    }
  }
  return out;
}

inline SLElem rmu_act_sq(const FPModule& M, int k, const SLElem& x) {
  if (M.pr.ell != 2) throw std::invalid_argument("rmu_act_sq: ell must be 2");
  SLElem y = rmu_act_P(M, k / 2, x);
  return (k % 2) ? rmu_act_beta(M, y) : y;
}

// ---------------------------------------------------------------------------
// Evaluation maps

// epsilon(h * beta^e P^r (x) m) = h * beta^e P^r(m) for r >= 0, 0 for r < 0.
inline ModElem eval_small(const FPModule& M, const SSElem& x) {
  ModElem out;
  for (auto& [key, h] : x.ts) {
    auto [e, r, g] = key;
    if (r < 0) continue;
    ModElem part = act(M, milnor_bP(M.pr, AlgTag::an(M.env), e, r), ModElem::gen(g));
    ModElem scaled;
    scaled.add_scaled(M.pr, part, h);
    out.add(M.pr, scaled);
  }
  return out;
}

// Translate a large slot through pi and the band identification:
//   Sigma u v^{(l-1)k-1} |-> (-1)^k P^k,  Sigma v^{(l-1)k} |-> -(-1)^k beta P^k,
// all other slots to zero; then evaluate.
inline SSElem large_to_small(const FPModule& M, const SLElem& x) {
  const Profile& pr = M.pr;
  int ell = pr.ell;
  SSElem out;
  for (auto& [key, h] : x.ts) {
    auto [i, K, g] = key;
    if (i == 1) {
      if ((K + 1) % (ell - 1)) continue;
      int k = (K + 1) / (ell - 1);
      out.add(pr, 0, k, g, hp_scale(pr, h, fp_sign(k, ell)));
    } else {
      if (K % (ell - 1)) continue;
      int k = K / (ell - 1);
      out.add(pr, 1, k, g, hp_scale(pr, h, -fp_sign(k, ell)));
    }
  }
  return out;
}

inline ModElem eval_large(const FPModule& M, const SLElem& x) {
  return eval_small(M, large_to_small(M, x));
}

// ---------------------------------------------------------------------------
// Identification with the localized B Sigma_ell band (M = H):
// P^k |-> Sigma c d^{k-1}, beta P^k |-> -Sigma d^k.

inline ModElem iso_rs_to_bsigma(const FPModule& M, const SSElem& x,
                                const FPModule& band) {
  if (band.kind != FPModule::BSigma || band.sp != 1)
    throw std::invalid_argument("iso_rs_to_bsigma: need a suspended bsigma band");
  ModElem out;
  for (auto& [key, h] : x.ts) {
    auto [e, r, g] = key;
    if (g != 0) throw std::invalid_argument("iso_rs_to_bsigma: base must be H");
    int tg = band.find_band_gen(e ? 0 : 1, e ? r : r - 1);
    if (tg < 0) throw std::runtime_error("iso_rs_to_bsigma: band overflow");
    out.add(band.pr, tg, hp_scale(band.pr, h, e ? -1 : 1));
  }
  return out;
}

inline SSElem iso_bsigma_to_rs(const FPModule& band, const ModElem& x) {
  SSElem out;
  for (auto& [g, h] : x.ts) {
    int i = band.gens[g].i, k = band.gens[g].k;
    if (i == 1)
      out.add(band.pr, 0, k + 1, 0, h);
    else
      out.add(band.pr, 1, k, 0, hp_scale(band.pr, h, -1));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stabilization: rewrite b (x) m (b in B(n), m over an A(n-1)-compatible
// module) in the B(0) (x) M normal form.

inline SSElem stabilize(const FPModule& M, const MilnorElem& b, const ModElem& m) {
  if (b.tag.kind != AlgTag::Bn)
    throw std::invalid_argument("stabilize: b must be tagged B(n)");
  int n = b.tag.n;
  const Profile& pr = M.pr;
  SSElem out;
  if (n == 0) {
    for (auto& [m0, h] : b.ts)
      out.add(pr, detail::ss_tensor(M, h, static_cast<int>(m0.E & 1), m0.r(1), m));
    return out;
  }
  if (M.env < n - 1) throw std::invalid_argument("stabilize: envelope too small");
  for (auto& [er, bi] : decompose_right_An1(b)) {
    MilnorElem bi2 = embed_milnor(bi, M.env);
    ModElem inner = act(M, bi2, m);
    out.add(pr, detail::ss_tensor(M, HPoly::one(), er.first, er.second, inner));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The basis-change map Phi on the M = H shadow: c |-> -tau_0 xi_1^{-1} + rho,
// d |-> xi_1^{-1}, landing in B(0)_{*,*}.

inline DualElem phi_of_band_gen(const Profile& pr, int i, int k) {
  AlgTag b0 = AlgTag::bn(0);
  Mono xk;
  if (k != 0) xk.set_r(1, -k);
  DualElem x = DualElem::monomial(pr, b0, xk);
  if (i) {
    DualElem c(pr, b0);
    Mono t0x;
    t0x.E = 1;
    t0x.set_r(1, -1);
    c.add(t0x, hp_scale(pr, HPoly::one(), -1));
    c.add(Mono{}, HPoly::mono(pr, 1, 0));
    x = mul(x, c);
  }
  return x;
}

}  // namespace msing

#endif  // MSING_SINGER_HPP
