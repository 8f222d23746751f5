#ifndef MSING_TESTS_ORACLE_COBAR_HPP
#define MSING_TESTS_ORACLE_COBAR_HPP

// Independent Ext oracle: the reduced cobar complex of the dual coalgebra of
// A(n) over the TRIVIAL profile (ground field F_ell).  Shares only the
// coproduct and monomial enumeration with the engine; the resolution
// machinery of ext.hpp is not used.  d^2 = 0 is asserted on the window.

#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "msing/dualalg.hpp"
#include "msing/linalg.hpp"

namespace msing::oracle {

struct Cobar {
  Profile pr;
  AlgTag an;
  std::vector<Mono> bas;                 // positive-degree basis monomials
  std::map<Mono, int> index;
  std::vector<long long> deg, wt;
  // reduced coproduct: list of (i, j, coefficient) per basis element
  std::vector<std::vector<std::tuple<int, int, int>>> red;
};

inline Cobar cobar_setup(const Profile& pr, int n, long long tmax) {
  if (pr.kind != ProfileKind::Trivial)
    throw std::invalid_argument("cobar oracle: TRIVIAL profile only");
  Cobar C{pr, AlgTag::an(n), {}, {}, {}, {}, {}};
  for (auto& m : monos_up_to_degree(pr, C.an, tmax))
    if (!m.is_one()) {
      C.index[m] = static_cast<int>(C.bas.size());
      C.bas.push_back(m);
      C.deg.push_back(mono_deg(m, pr.ell));
      C.wt.push_back(mono_wt(m, pr.ell));
    }
  C.red.resize(C.bas.size());
  for (size_t i = 0; i < C.bas.size(); ++i) {
    Tensor t = coproduct(DualElem::monomial(pr, C.an, C.bas[i]));
    for (auto& [mm, h] : t.ts) {
      if (mm.first.is_one() || mm.second.is_one()) continue;
      auto it1 = C.index.find(mm.first);
      auto it2 = C.index.find(mm.second);
      if (it1 == C.index.end() || it2 == C.index.end())
        throw std::runtime_error("cobar oracle: basis window too small");
      int c = 0;
      auto ht = h.ts.find(HMono{0, 0});
      if (ht != h.ts.end()) c = ht->second;
      if (c) C.red[i].push_back({it1->second, it2->second, c});
    }
  }
  return C;
}

using Word = std::vector<int>;  // indices into C.bas

inline void cobar_words(const Cobar& C, int s, long long t, long long u,
                        Word& cur, long long d, long long w,
                        std::vector<Word>& out) {
  if (s == 0) {
    if (d == t && w == u) out.push_back(cur);
    return;
  }
  for (size_t i = 0; i < C.bas.size(); ++i) {
    if (d + C.deg[i] > t) continue;
    cur.push_back(static_cast<int>(i));
    cobar_words(C, s - 1, t, u, cur, d + C.deg[i], w + C.wt[i], out);
    cur.pop_back();
  }
}

inline std::vector<Word> cobar_basis(const Cobar& C, int s, long long t,
                                     long long u) {
  std::vector<Word> out;
  if (s == 0) {
    if (t == 0 && u == 0) out.push_back({});
    return out;
  }
  Word cur;
  cobar_words(C, s, t, u, cur, 0, 0, out);
  return out;
}

// d([a_1|...|a_s]) = sum_i (-1)^{i-1+|a_1|+...+|a_{i-1}|}
//                    [a_1|...|a_i'|a_i''|...|a_s]  (reduced coproduct)
inline FpMat cobar_delta(const Cobar& C, int s, long long t, long long u) {
  auto cb = cobar_basis(C, s, t, u);
  auto rb = cobar_basis(C, s + 1, t, u);
  std::map<Word, int> rindex;
  for (size_t i = 0; i < rb.size(); ++i) rindex[rb[i]] = static_cast<int>(i);
  FpMat D(C.pr.ell, static_cast<int>(rb.size()), static_cast<int>(cb.size()));
  for (size_t j = 0; j < cb.size(); ++j) {
    long long presign = 0;
    for (int pos = 0; pos < s; ++pos) {
      for (auto& [i1, i2, c] : C.red[cb[j][pos]]) {
        Word w = cb[j];
        w[pos] = i1;
        w.insert(w.begin() + pos + 1, i2);
        auto it = rindex.find(w);
        if (it == rindex.end()) throw std::runtime_error("cobar: missing word");
        // extra (-1)^{|a_i'|} from the desuspension passing the left factor
        int sgn = ((pos + presign + C.deg[i1]) % 2) ? C.pr.ell - 1 : 1;
        D.at(it->second, static_cast<int>(j)) = fp_add(
            D.at(it->second, static_cast<int>(j)), fp_mul(sgn, c, C.pr.ell), C.pr.ell);
      }
      presign += C.deg[cb[j][pos]];
    }
  }
  return D;
}

// dim Ext^{s,t,u} over the dual of A(n), with d^2 = 0 asserted.
inline int cobar_ext_dim(const Cobar& C, int s, long long t, long long u) {
  FpMat Ds = cobar_delta(C, s, t, u);
  // d^2 = 0 spot check at this trigrading
  {
    FpMat Dn = cobar_delta(C, s + 1, t, u);
    for (int j = 0; j < Ds.cols; ++j) {
      for (int i = 0; i < Dn.rows; ++i) {
        int acc = 0;
        for (int k = 0; k < Ds.rows; ++k)
          acc = fp_add(acc, fp_mul(Dn.at(i, k), Ds.at(k, j), C.pr.ell), C.pr.ell);
        if (acc) throw std::runtime_error("cobar: d^2 != 0");
      }
    }
  }
  int dim = Ds.cols - fp_rank(Ds);
  if (s > 0) dim -= fp_rank(cobar_delta(C, s - 1, t, u));
  return dim;
}

}  // namespace msing::oracle

#endif
