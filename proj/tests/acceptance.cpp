// Acceptance gate: one pass/fail line per criterion.
//
//   1. Hopf-algebroid axiom suite, four profiles, degree <= 16 (<= 2 min)
//   2. Left/right H-basis round-trips and comodule isomorphisms, degree <= 16
//   3. Milnor products: Sq2 Sq2 = tau Sq3 Sq1, [P_n^0, Q_0] = Q_n, and the
//      ell = 2 Adem identities for 0 < a < 2b, a + b <= 20 vs the oracle
//   4. Singer construction: n-independence, evaluation linearity, band iso
//   5. Ext dimensions vs the cobar oracle, A(0)/A(1), ell in {2,3} (<= 5 min)
//   6. Total-complex chart of the lens tower = chart of the colimit band
//   7. Residue map is an Ext-equivalence (three profiles, <= 15 min)
//   8. Weight-zero vanishing of Ext^{s,t,0}(H,H) at t - s = -1
//
// Exit code 0 iff all selected criteria pass.  Optional argv: criterion
// numbers to run (default all).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "msing/ext.hpp"
#include "msing/singer.hpp"
#include "oracle_adem.hpp"
#include "oracle_cobar.hpp"

using namespace msing;

static const Profile TRIV2{2, ProfileKind::Trivial};
static const Profile TRIV3{3, ProfileKind::Trivial};
static const Profile CPX{2, ProfileKind::Complex};
static const Profile REALP{2, ProfileKind::Real};
static const AlgTag F = AlgTag::full();

namespace {

int failures = 0;

#define REQUIRE_OK(cond)                                              \
  do {                                                                \
    if (!(cond)) {                                                    \
      std::printf("    check failed (%s:%d): %s\n", __FILE__,         \
                  __LINE__, #cond);                                   \
      return false;                                                   \
    }                                                                 \
  } while (0)

int cpart(const HPoly& h) {
  auto it = h.ts.find(HMono{0, 0});
  return it == h.ts.end() ? 0 : it->second;
}

// ---------------------------------------------------------------------------
// Criterion 1: Hopf-algebroid axioms, degree <= 16, four profiles.

// Triple tensors in right-normal form: sum m1 (x) m2 (x) h*m3.
using Triple = std::map<std::tuple<Mono, Mono, Mono>, HPoly>;

void triple_add(const Profile& pr, Triple& t, const Mono& a, const Mono& b,
                const Mono& c, const HPoly& h) {
  if (h.zero()) return;
  HPoly& slot = t[{a, b, c}];
  slot.add(pr, h);
  if (slot.zero()) t.erase({a, b, c});
}

Triple psi_left(const Tensor& t) {  // (psi (x) 1)
  Triple out;
  for (auto& [mm, h] : t.ts)
    for (auto& [ab, g] : psi_full_mono(t.pr, mm.first).ts) {
      DualElem gb(t.pr, F);
      gb.add(ab.second, g);
      for (auto& [b2, g2] : to_right_basis(gb))
        triple_add(t.pr, out, ab.first, b2, mm.second, hp_mul(t.pr, g2, h));
    }
  return out;
}

Triple psi_right(const Tensor& t) {  // (1 (x) psi)
  Triple out;
  for (auto& [mm, h] : t.ts) {
    Tensor p = tensor_scale_left(psi_full_mono(t.pr, mm.second), h);
    for (auto& [bc, k] : p.ts)
      triple_add(t.pr, out, mm.first, bc.first, bc.second, k);
  }
  return out;
}

DualElem counit_left(const Tensor& t) {
  DualElem out(t.pr, t.tagR);
  for (auto& [mm, h] : t.ts)
    if (mm.first.is_one()) out.add(mm.second, h);
  return out;
}

DualElem counit_right(const Tensor& t) {
  std::vector<std::pair<Mono, HPoly>> rb;
  for (auto& [mm, h] : t.ts)
    if (mm.second.is_one()) rb.push_back({mm.first, h});
  return from_right_basis(t.pr, t.tagL, rb);
}

DualElem mu_chi_left(const Tensor& t) {  // mult (chi (x) 1)
  DualElem out(t.pr, t.tagL);
  for (auto& [mm, h] : t.ts) {
    DualElem x = conjugate(DualElem::monomial(t.pr, t.tagL, mm.first));
    DualElem prod = mul(x, DualElem::monomial(t.pr, t.tagL, mm.second));
    DualElem scaled(t.pr, t.tagL);
    scaled.add_scaled(prod, h);
    out.add(scaled);
  }
  return out;
}

DualElem mu_chi_right(const Tensor& t) {  // mult (1 (x) chi)
  DualElem out(t.pr, t.tagL);
  for (auto& [mm, h] : t.ts) {
    DualElem x = conjugate(DualElem::monomial(t.pr, t.tagR, mm.second));
    out.add(mul(DualElem::monomial(t.pr, t.tagL, mm.first),
                mul(eta_right(t.pr, t.tagL, h), x)));
  }
  return out;
}

bool criterion1() {
  const long long D = 16;
  for (const Profile& pr : {TRIV2, TRIV3, CPX, REALP}) {
    auto monos = monos_up_to_degree(pr, F, D);
    std::vector<DualElem> xs;
    std::vector<Tensor> ps;
    for (auto& m : monos) {
      DualElem x = DualElem::monomial(pr, F, m);
      Tensor p = coproduct(x);
      // coassociativity and counits
      REQUIRE_OK(psi_left(p) == psi_right(p));
      REQUIRE_OK(counit_left(p) == x);
      REQUIRE_OK(counit_right(p) == x);
      // chi^2 = 1
      REQUIRE_OK(conjugate(conjugate(x)) == x);
      // antipode identities
      DualElem el(pr, F);
      el.add(Mono{}, counit_poly(x));
      REQUIRE_OK(mu_chi_right(p) == el);
      REQUIRE_OK(mu_chi_left(p) == eta_right(pr, F, counit_poly(x)));
      xs.push_back(std::move(x));
      ps.push_back(std::move(p));
    }
    // psi, counit, chi are algebra maps on pairs within the degree window
    for (size_t i = 0; i < monos.size(); ++i) {
      long long di = mono_deg(monos[i], pr.ell);
      for (size_t j = i; j < monos.size(); ++j) {
        if (di + mono_deg(monos[j], pr.ell) > D) continue;
        DualElem prod = mul(xs[i], xs[j]);
        REQUIRE_OK(coproduct(prod) == tensor_mul(ps[i], ps[j]));
        REQUIRE_OK(counit_poly(prod) ==
                   hp_mul(pr, counit_poly(xs[i]), counit_poly(xs[j])));
        REQUIRE_OK(conjugate(prod) == mul(conjugate(xs[i]), conjugate(xs[j])));
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 2: basis round-trips and comodule isomorphisms, degree <= 16.
//
// Bijectivity per bidegree of a bidegree-preserving left H-linear map of
// free H-modules is equivalent (graded Nakayama, finite per bidegree) to
// invertibility of the matrix of constant coefficient parts over F_ell.

struct IsoCheck {
  // source monomials grouped by (deg, wt), image coordinates per source,
  // and target slot enumeration grouped by (deg, wt)
  std::map<std::pair<long long, long long>, std::vector<int>> src_groups;
  std::vector<std::map<std::pair<Mono, Mono>, int>> images;  // key -> coeff
  std::map<std::pair<long long, long long>,
           std::vector<std::pair<Mono, Mono>>> tgt_groups;
};

bool iso_groups_bijective(int ell, const IsoCheck& ic) {
  std::set<std::pair<long long, long long>> keys;
  for (auto& [k, v] : ic.src_groups) keys.insert(k);
  for (auto& [k, v] : ic.tgt_groups) keys.insert(k);
  for (auto& key : keys) {
    auto si = ic.src_groups.find(key);
    auto ti = ic.tgt_groups.find(key);
    size_t ns = si == ic.src_groups.end() ? 0 : si->second.size();
    size_t nt = ti == ic.tgt_groups.end() ? 0 : ti->second.size();
    if (ns != nt) return false;
    if (ns == 0) continue;
    std::map<std::pair<Mono, Mono>, int> index;
    for (size_t r = 0; r < nt; ++r) index[ti->second[r]] = static_cast<int>(r);
    FpMat M(ell, static_cast<int>(nt), static_cast<int>(ns));
    for (size_t c = 0; c < ns; ++c)
      for (auto& [slot, v] : ic.images[si->second[c]]) {
        auto it = index.find(slot);
        if (it == index.end()) return false;  // image outside the target basis
        M.at(it->second, static_cast<int>(c)) = fp_norm(v, ell);
      }
    if (fp_rank(M) != static_cast<int>(nt)) return false;
  }
  return true;
}

bool mono_is_b0_shape(const Mono& m) {
  if (m.E & ~1u) return false;
  for (int s = 2; s <= 12; ++s)
    if (m.r(s) != 0) return false;
  return true;
}

Mono b0_mono(int e, int r1) {
  Mono m;
  m.E = e ? 1u : 0u;
  if (r1) m.set_r(1, r1);
  return m;
}

bool criterion2() {
  const long long D = 16;
  for (const Profile& pr : {TRIV2, TRIV3, CPX, REALP}) {
    const int P2 = static_cast<int>(ipow(pr.ell, 2));
    const long long xdeg = 2 * (pr.ell - 1);  // |xi_1|
    // --- right-basis round trips on all four ambient algebras
    for (AlgTag tag : {F, AlgTag::an(2), AlgTag::cn(2)})
      for (auto& m : monos_up_to_degree(pr, tag, D)) {
        DualElem x = DualElem::monomial(pr, tag, m);
        REQUIRE_OK(from_right_basis(pr, tag, to_right_basis(x)) == x);
      }
    for (auto& m : monos_in_degree_band(pr, AlgTag::bn(2), -D, D)) {
      DualElem x = DualElem::monomial(pr, AlgTag::bn(2), m);
      REQUIRE_OK(from_right_basis(pr, AlgTag::bn(2), to_right_basis(x)) == x);
    }

    auto a2 = monos_up_to_degree(pr, AlgTag::an(2), 1000000);
    auto a1 = monos_up_to_degree(pr, AlgTag::an(1), 1000000);
    long long maxa2 = 0, maxa1 = 0;
    for (auto& m : a2) maxa2 = std::max(maxa2, mono_deg(m, pr.ell));
    for (auto& m : a1) maxa1 = std::max(maxa1, mono_deg(m, pr.ell));

    // --- (pi_2 (x) alpha_2) psi : A -> A(2) (x) X(2)
    {
      IsoCheck ic;
      auto src = monos_up_to_degree(pr, F, D);
      for (size_t i = 0; i < src.size(); ++i) {
        ic.src_groups[{mono_deg(src[i], pr.ell), mono_wt(src[i], pr.ell)}]
            .push_back(static_cast<int>(i));
        std::map<std::pair<Mono, Mono>, int> img;
        Tensor t = tensor_project(psi_full_mono(pr, src[i]), AlgTag::an(2), F);
        for (auto& [mm, h] : t.ts)
          if (mono_in_xn(pr, mm.second, 2)) {
            int c = cpart(h);
            if (c) img[{mm.first, mm.second}] = fp_add(img[{mm.first, mm.second}], c, pr.ell);
          }
        ic.images.push_back(std::move(img));
      }
      for (auto& mx : monos_up_to_degree(pr, F, D))
        if (mono_in_xn(pr, mx, 2)) {
          long long dx = mono_deg(mx, pr.ell), wx = mono_wt(mx, pr.ell);
          for (auto& ma : a2) {
            long long d = mono_deg(ma, pr.ell) + dx;
            if (d > D) continue;
            ic.tgt_groups[{d, mono_wt(ma, pr.ell) + wx}].push_back({ma, mx});
          }
        }
      REQUIRE_OK(iso_groups_bijective(pr.ell, ic));
    }

    // --- (id (x) gamma'_2) lambda_2 : C(2) -> A(2) (x) H[xi_1^{ell^2}]
    // --- (id (x) beta'_2) lambda_2 : B(2) -> A(2) (x) H[xi_1^{+-ell^2}]
    for (bool localized : {false, true}) {
      AlgTag tag = localized ? AlgTag::bn(2) : AlgTag::cn(2);
      IsoCheck ic;
      auto src = localized ? monos_in_degree_band(pr, tag, -D, D)
                           : monos_up_to_degree(pr, tag, D);
      for (size_t i = 0; i < src.size(); ++i) {
        ic.src_groups[{mono_deg(src[i], pr.ell), mono_wt(src[i], pr.ell)}]
            .push_back(static_cast<int>(i));
        std::map<std::pair<Mono, Mono>, int> img;
        Tensor t = coact_left(DualElem::monomial(pr, tag, src[i]));
        for (auto& [mm, h] : t.ts) {
          const Mono& r = mm.second;
          if (!mono_is_b0_shape(r) || (r.E & 1u) || r.r(1) % P2 != 0) continue;
          int c = cpart(h);
          if (c) {
            auto key = std::make_pair(mm.first, b0_mono(0, r.r(1)));
            img[key] = fp_add(img[key], c, pr.ell);
          }
        }
        ic.images.push_back(std::move(img));
      }
      long long klo = localized ? -(D + maxa2) / (P2 * xdeg) - 1 : 0;
      for (long long k = klo; k * P2 * xdeg <= D; ++k)
        for (auto& ma : a2) {
          long long d = mono_deg(ma, pr.ell) + k * P2 * xdeg;
          if (d < -D || d > D || (!localized && d > D)) continue;
          if (!localized && d < 0) continue;
          ic.tgt_groups[{d, mono_wt(ma, pr.ell) + k * P2 * (pr.ell - 1)}]
              .push_back({ma, b0_mono(0, static_cast<int>(k) * P2)});
        }
      REQUIRE_OK(iso_groups_bijective(pr.ell, ic));
    }

    // --- (beta_2 (x) id) rho_2 : B(2) -> B(0) (x) A(1)
    {
      IsoCheck ic;
      auto src = monos_in_degree_band(pr, AlgTag::bn(2), -D, D);
      for (size_t i = 0; i < src.size(); ++i) {
        ic.src_groups[{mono_deg(src[i], pr.ell), mono_wt(src[i], pr.ell)}]
            .push_back(static_cast<int>(i));
        std::map<std::pair<Mono, Mono>, int> img;
        Tensor t = coact_right(DualElem::monomial(pr, AlgTag::bn(2), src[i]));
        for (auto& [mm, h] : t.ts) {
          if (!mono_is_b0_shape(mm.first)) continue;
          int c = cpart(h);
          if (c) {
            auto key = std::make_pair(mm.first, mm.second);
            img[key] = fp_add(img[key], c, pr.ell);
          }
        }
        ic.images.push_back(std::move(img));
      }
      for (int e : {0, 1})
        for (long long r1 = (-D - maxa1) / xdeg - 2; e + r1 * xdeg <= D; ++r1) {
          Mono mb = b0_mono(e, static_cast<int>(r1));
          long long db = mono_deg(mb, pr.ell), wb = mono_wt(mb, pr.ell);
          for (auto& mr : a1) {
            long long d = db + mono_deg(mr, pr.ell);
            if (d < -D || d > D) continue;
            ic.tgt_groups[{d, wb + mono_wt(mr, pr.ell)}].push_back({mb, mr});
          }
        }
      REQUIRE_OK(iso_groups_bijective(pr.ell, ic));
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 3: Milnor products and the ell = 2 Adem identities.

bool criterion3() {
  // Sq2 Sq2 = tau Sq3 Sq1 in A(1), REAL coefficients
  {
    AlgTag t = AlgTag::an(1);
    MilnorElem lhs = milnor_mul(milnor_Sq(REALP, t, 2), milnor_Sq(REALP, t, 2));
    MilnorElem rhs = milnor_mul(
        h_times(REALP, t, HElem(REALP, 0, 1, 1)),
        milnor_mul(milnor_Sq(REALP, t, 3), milnor_Sq(REALP, t, 1)));
    REQUIRE_OK(lhs == rhs);
  }
  // [P_n^0, Q_0] = Q_n for n <= 3
  for (const Profile& pr : {TRIV2, TRIV3, REALP})
    for (int n = 1; n <= 3; ++n) {
      AlgTag t = AlgTag::an(n);
      MilnorElem pn0 = milnor_Pij(pr, t, n, 0);
      MilnorElem q0 = milnor_Q(pr, t, 0);
      MilnorElem comm = milnor_mul(pn0, q0);
      comm.add(milnor_mul(q0, pn0), -1);
      REQUIRE_OK(comm == milnor_Q(pr, t, n));
    }
  // Adem identities at ell = 2 against the closed-formula oracle
  {
    AlgTag t = AlgTag::an(4);
    for (int b = 1; b <= 19; ++b)
      for (int a = 1; a < 2 * b && a + b <= 20; ++a) {
        MilnorElem lhs =
            milnor_mul(milnor_Sq(REALP, t, a), milnor_Sq(REALP, t, b));
        MilnorElem rhs(REALP, t);
        for (auto& term : oracle::adem_rhs(REALP, a, b)) {
          MilnorElem x = milnor_Sq(REALP, t, term.c1);
          if (term.c2) x = milnor_mul(x, milnor_Sq(REALP, t, term.c2));
          rhs.add_scaled(x, term.h);
        }
        if (!(lhs == rhs)) {
          std::printf("    Adem mismatch at Sq^%d Sq^%d\n", a, b);
          return false;
        }
      }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 4: Singer construction.

bool criterion4() {
  // n-independence of the action through B(n) (x)_{A(n-1)} M, n in {1,2,3}
  for (const Profile& pr : {TRIV2, CPX, REALP, TRIV3}) {
    FPModule M = bmu_band(pr, 3, -4, 60);
    int g = M.find_band_gen(0, 1);
    for (int n = 1; n <= 3; ++n) {
      bool big = pr.ell == 3 && n == 3;  // keep the widest case to a sample
      std::vector<std::pair<int, int>> slots =
          big ? std::vector<std::pair<int, int>>{{0, 1}, {1, -1}}
              : std::vector<std::pair<int, int>>{{0, -2}, {0, 1}, {1, -1}, {1, 0}};
      AlgTag bn = AlgTag::bn(n), an = AlgTag::an(n);
      for (auto [e, r] : slots) {
        MilnorElem b = milnor_bP(pr, bn, e, r);
        SSElem x = SSElem::slot(e, r, g);
        REQUIRE_OK(stabilize(M, act_left(milnor_Q(pr, an, 0), b),
                             ModElem::gen(g)) == rs_act_beta(M, x));
        int amax = static_cast<int>(
            std::min<long long>(big ? 2 : 4, ipow(pr.ell, n) - 1));
        for (int a = 1; a <= amax; ++a)
          REQUIRE_OK(stabilize(M, act_left(milnor_P(pr, an, a), b),
                               ModElem::gen(g)) == rs_act_P(M, a, x));
      }
    }
  }
  // evaluation maps are A-linear for beta and P^a up to a = ell^2
  for (const Profile& pr : {TRIV2, CPX, REALP, TRIV3}) {
    FPModule M = bmu_band(pr, 3, -4, 40);
    int maxP = pr.ell * pr.ell;
    std::vector<std::pair<int, int>> slots = {{0, -2}, {0, 0}, {0, 2}, {1, -1}, {1, 1}};
    for (int g : {M.find_band_gen(0, 0), M.find_band_gen(1, 1)})
      for (auto [e, r] : slots) {
        SSElem x = SSElem::slot(e, r, g);
        SLElem y = SLElem::slot(e, r + 3, g);
        REQUIRE_OK(eval_small(M, rs_act_beta(M, x)) ==
                   act(M, milnor_Q(pr, AlgTag::an(3), 0), eval_small(M, x)));
        REQUIRE_OK(eval_large(M, rmu_act_beta(M, y)) ==
                   act(M, milnor_Q(pr, AlgTag::an(3), 0), eval_large(M, y)));
        for (int a = 1; a <= maxP; ++a) {
          MilnorElem pa = milnor_P(pr, AlgTag::an(3), a);
          REQUIRE_OK(eval_small(M, rs_act_P(M, a, x)) ==
                     act(M, pa, eval_small(M, x)));
          REQUIRE_OK(eval_large(M, rmu_act_P(M, a, y)) ==
                     act(M, pa, eval_large(M, y)));
        }
      }
  }
  // the band identification intertwines the actions on k in [-8, 8]
  for (const Profile& pr : {TRIV2, CPX, REALP, TRIV3}) {
    FPModule H = trivial_module(pr, 2);
    FPModule band = suspend(bsigma_band(pr, 2, -11, 16), 1, 0);
    for (int e : {0, 1})
      for (int r = -8; r <= 8; ++r) {
        SSElem x = SSElem::slot(e, r);
        ModElem ix = iso_rs_to_bsigma(H, x, band);
        REQUIRE_OK(iso_bsigma_to_rs(band, ix) == x);
        REQUIRE_OK(iso_rs_to_bsigma(H, rs_act_beta(H, x), band) ==
                   act(band, milnor_Q(pr, AlgTag::an(2), 0), ix));
        for (int a : {1, 2, 3})
          REQUIRE_OK(iso_rs_to_bsigma(H, rs_act_P(H, a, x), band) ==
                     act(band, milnor_P(pr, AlgTag::an(2), a), ix));
      }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 5: Ext dimensions vs the cobar oracle.

bool criterion5() {
  for (const Profile& pr : {TRIV2, TRIV3})
    for (int n : {0, 1}) {
      long long tmax = 12;
      ExtWindow win{4, 0, tmax, tmax};
      ExtChart ch = ext_dims(trivial_module(pr, n), n, win);
      auto C = oracle::cobar_setup(pr, n, tmax);
      for (int s = 0; s <= 4; ++s)
        for (long long t = 0; t <= tmax; ++t)
          for (long long u = 0; u <= t; ++u) {
            auto it = ch.entries.find({s, t, u});
            int dim = it == ch.entries.end() ? 0 : it->second;
            if (dim != oracle::cobar_ext_dim(C, s, t, u)) {
              std::printf("    mismatch at ell=%d n=%d (s,t,u)=(%d,%lld,%lld)\n",
                          pr.ell, n, s, t, u);
              return false;
            }
          }
    }
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 6: lens-tower total complex = chart of the colimit band.

bool criterion6() {
  ExtWindow win{3, -4, 9, 9};
  Tower T = lens_tower(TRIV2, 2, 0, 4, 8);
  ExtChart ch = total_complex_e2(T, 2, win);
  FPModule colim = tower_colim(T, Window{-6, 6});
  ExtChart direct = ext_dims(colim, 2, win);
  REQUIRE_OK(ch.same_entries(direct));
  return true;
}

// ---------------------------------------------------------------------------
// Criteria 7 and 8: residue Ext-equivalence and weight-zero vanishing.

ModHom residue_hom(const FPModule& M, const FPModule& N) {
  ModHom f;
  f.src = &M;
  f.dst = &N;
  for (size_t g = 0; g < M.gens.size(); ++g) {
    ModElem img;
    HElem r = residue(M, ModElem::gen(static_cast<int>(g)));
    if (!r.zero()) img.add(M.pr, 0, r.poly());
    f.images.push_back(std::move(img));
  }
  return f;
}

// Calibrated band bottom per envelope: edge-artifact reach grows with the
// top degree of A(n), roughly twice as fast again at ell = 3.
static int band_klo(const Profile& pr, int n) {
  if (pr.ell == 2) return n <= 1 ? -4 : 4 - 8 * n;
  return n <= 0 ? -4 : (n == 1 ? -12 : -36);
}

bool criterion7() {
  // Verdict asserted on s <= 3, t - s in [0, 6]; charts are computed on the
  // rectangular hull {t in [0, 9]}.  The band deepens with the envelope n
  // because the reach of edge artifacts grows with the top degree of A(n);
  // every band used stays within half-width 12 (in Singer slot units, one
  // slot = 2(ell-1) in v-degree).  Stabilization uses the localized-source
  // scheme: the source chart over A(n) reproduces the target chart over
  // A(n-1), so the verdict is issued when cm(n) == cn(n-1) == cn(n) with the
  // induced map an isomorphism, each source chart confirmed against an
  // independent deeper band.
  ExtWindow win{3, 0, 9, 9};
  StemRange stems{0, 6};
  for (const Profile& pr : {TRIV2, TRIV3, CPX}) {
    EquivProblem P;
    P.src = [pr](int n) {
      return suspend(bmu_band(pr, n, band_klo(pr, n), 4), 1, 0);
    };
    P.src_confirm = [pr](int n) {
      int deepen = 4 * (pr.ell - 1);
      return suspend(bmu_band(pr, n, band_klo(pr, n) - deepen, 4), 1, 0);
    };
    P.dst = [pr](int n) { return trivial_module(pr, n); };
    P.hom = residue_hom;
    P.shifted_envelope = true;
    auto r = ext_equiv_check(P, win, 0, 3, stems);
    int half_width = r.witness_n >= 0
                         ? (4 - band_klo(pr, r.witness_n)) / (2 * (pr.ell - 1))
                         : -1;
    std::printf("    ell=%d %s: %s (witness n=%d, band [%d,4], half-width %d)\n",
                pr.ell,
                pr.kind == ProfileKind::Trivial ? "trivial" : "complex",
                r.verdict == EquivVerdict::Iso
                    ? "ISO"
                    : (r.verdict == EquivVerdict::Fail ? "FAIL" : "INCONCLUSIVE"),
                r.witness_n, r.witness_n >= 0 ? band_klo(pr, r.witness_n) : 0,
                half_width);
    REQUIRE_OK(r.verdict == EquivVerdict::Iso);
    REQUIRE_OK(r.witness_n <= 3);
    REQUIRE_OK(half_width <= 12);
  }
  return true;
}

bool criterion8() {
  ExtWindow win{3, 0, 9, 9};
  for (const Profile& pr : {TRIV2, TRIV3, CPX}) {
    auto st = stabilize_over_n([pr](int n) { return trivial_module(pr, n); },
                               win, 0, 4);
    REQUIRE_OK(st.chart.has_value());
    for (int s = 1; s <= 3; ++s) {
      auto it = st.chart->entries.find({s, static_cast<long long>(s - 1), 0LL});
      REQUIRE_OK(it == st.chart->entries.end() || it->second == 0);
    }
  }
  return true;
}

void run(int id, bool (*fn)(), double limit_sec) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = fn();
  } catch (const std::exception& e) {
    std::printf("    exception: %s\n", e.what());
    ok = false;
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                  .count();
  if (ok && limit_sec > 0 && dt > limit_sec) {
    std::printf("    over time budget: %.1fs > %.0fs\n", dt, limit_sec);
    ok = false;
  }
  std::printf("criterion %d: %s (%.1fs)\n", id, ok ? "PASS" : "FAIL", dt);
  std::fflush(stdout);
  if (!ok) ++failures;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  auto want = [&](int id) { return only.empty() || only.count(id); };

  if (want(1)) run(1, criterion1, 120);
  if (want(2)) run(2, criterion2, 0);
  if (want(3)) run(3, criterion3, 0);
  if (want(4)) run(4, criterion4, 0);
  if (want(5)) run(5, criterion5, 300);
  if (want(6)) run(6, criterion6, 0);
  if (want(7)) run(7, criterion7, 900);
  if (want(8)) run(8, criterion8, 0);
  return failures == 0 ? 0 : 1;
}
