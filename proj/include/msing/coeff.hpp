#ifndef MSING_COEFF_HPP
#define MSING_COEFF_HPP

// Coefficient rings H^{*,*} = H_{-*,-*} in three profiles:
//   TRIVIAL  tau = rho = 0 (any prime ell)
//   COMPLEX  rho = 0, tau free (ell = 2)
//   REAL     tau, rho both free (ell = 2)
// Monomial basis rho^a tau^b with cohomological bidegree (a, a+b); each
// bidegree has F_ell-dimension <= 1.  The Bockstein acts as the derivation
// with beta(tau) = rho, beta(rho) = 0 (REAL; zero otherwise) — see
// docs/coefficients.md for where this pins down.

#include <compare>
#include <map>
#include <stdexcept>
#include <string>

#include "fp.hpp"

namespace msing {

enum class ProfileKind { Trivial, Complex, Real };

struct Profile {
  int ell = 2;
  ProfileKind kind = ProfileKind::Trivial;
  int dim_d = 0;  // Krull-dimension bound, used only in cone estimates

  void validate() const {
    if (ell < 2) throw std::invalid_argument("Profile: ell must be prime >= 2");
    if (kind != ProfileKind::Trivial && ell != 2)
      throw std::invalid_argument("Profile: COMPLEX/REAL require ell = 2");
  }
  bool operator==(const Profile& o) const {
    return ell == o.ell && kind == o.kind;
  }
  // Is the monomial rho^a tau^b nonzero in this profile?
  bool allows(int a, int b) const {
    if (a < 0 || b < 0) return false;
    switch (kind) {
      case ProfileKind::Trivial: return a == 0 && b == 0;
      case ProfileKind::Complex: return a == 0;
      case ProfileKind::Real: return true;
    }
    return false;
  }
  std::string name() const {
    switch (kind) {
      case ProfileKind::Trivial: return "trivial";
      case ProfileKind::Complex: return "complex";
      case ProfileKind::Real: return "real";
    }
    return "?";
  }
};

// Exponent pair of a coefficient monomial rho^a tau^b.
struct HMono {
  int a = 0, b = 0;
  auto operator<=>(const HMono&) const = default;
};

// Internal plumbing: an F_ell-combination of coefficient monomials, not
// necessarily homogeneous.  Zero coefficients and profile-killed monomials
// are dropped eagerly.
struct HPoly {
  std::map<HMono, int> ts;

  bool zero() const { return ts.empty(); }
  void add(const Profile& pr, HMono m, int c) {
    c = fp_norm(c, pr.ell);
    if (c == 0 || !pr.allows(m.a, m.b)) return;
    int& slot = ts[m];
    slot = fp_add(slot, c, pr.ell);
    if (slot == 0) ts.erase(m);
  }
  void add(const Profile& pr, const HPoly& o, int scale = 1) {
    for (auto& [m, c] : o.ts) add(pr, m, fp_mul(c, fp_norm(scale, pr.ell), pr.ell));
  }
  static HPoly one() {
    HPoly h;
    h.ts[{0, 0}] = 1;
    return h;
  }
  static HPoly mono(const Profile& pr, int a, int b, int c = 1) {
    HPoly h;
    h.add(pr, {a, b}, c);
    return h;
  }
  bool operator==(const HPoly& o) const { return ts == o.ts; }
};

inline HPoly hp_mul(const Profile& pr, const HPoly& x, const HPoly& y) {
  HPoly r;
  for (auto& [mx, cx] : x.ts)
    for (auto& [my, cy] : y.ts)
      r.add(pr, {mx.a + my.a, mx.b + my.b}, fp_mul(cx, cy, pr.ell));
  return r;
}

inline HPoly hp_scale(const Profile& pr, const HPoly& x, int c) {
  HPoly r;
  r.add(pr, x, c);
  return r;
}

// Bockstein as a derivation: beta(rho^a tau^b) = b rho^{a+1} tau^{b-1}
// (REAL only; zero in TRIVIAL/COMPLEX where rho = 0).
inline HPoly hp_beta(const Profile& pr, const HPoly& x) {
  HPoly r;
  if (pr.kind != ProfileKind::Real) return r;
  for (auto& [m, c] : x.ts)
    if (m.b > 0) r.add(pr, {m.a + 1, m.b - 1}, fp_mul(c, fp_norm(m.b, pr.ell), pr.ell));
  return r;
}

// Public homogeneous coefficient element: zero, or c * rho^a tau^b.
class HElem {
 public:
  HElem() = default;
  explicit HElem(Profile pr) : pr_(pr) {}
  HElem(Profile pr, int a, int b, int c) : pr_(pr) {
    pr.validate();
    c = fp_norm(c, pr.ell);
    if (c != 0 && pr.allows(a, b)) {
      m_ = {a, b};
      c_ = c;
    }
  }
  static HElem unit(Profile pr) { return HElem(pr, 0, 0, 1); }
  static HElem from_poly(const Profile& pr, const HPoly& h) {
    if (h.ts.size() > 1)
      throw std::invalid_argument("HElem: non-homogeneous coefficient");
    HElem e(pr);
    if (!h.ts.empty()) {
      e.m_ = h.ts.begin()->first;
      e.c_ = h.ts.begin()->second;
    }
    return e;
  }

  const Profile& profile() const { return pr_; }
  bool zero() const { return c_ == 0; }
  int a() const { return m_.a; }
  int b() const { return m_.b; }
  int coeff() const { return c_; }
  // cohomological bidegree (p, q); only meaningful when nonzero
  int p() const { return m_.a; }
  int q() const { return m_.a + m_.b; }
  HPoly poly() const {
    HPoly h;
    if (c_) h.ts[m_] = c_;
    return h;
  }
  bool operator==(const HElem& o) const {
    return c_ == o.c_ && (c_ == 0 || m_ == o.m_);
  }
  std::string str() const {
    if (zero()) return "0";
    std::string s;
    if (c_ != 1 || (m_.a == 0 && m_.b == 0)) s += std::to_string(c_);
    auto app = [&](const char* v, int e) {
      if (e == 0) return;
      if (!s.empty()) s += "*";
      s += v;
      if (e != 1) s += "^" + std::to_string(e);
    };
    app("r", m_.a);
    app("T", m_.b);
    return s;
  }

 private:
  Profile pr_;
  HMono m_{0, 0};
  int c_ = 0;
};

inline HElem h_mul(const HElem& x, const HElem& y) {
  if (!(x.profile() == y.profile()))
    throw std::invalid_argument("h_mul: profile mismatch");
  return HElem(x.profile(), x.a() + y.a(), x.b() + y.b(),
               fp_mul(x.coeff(), y.coeff(), x.profile().ell));
}

inline HElem h_beta(const HElem& x) {
  return HElem::from_poly(x.profile(), hp_beta(x.profile(), x.poly()));
}

// F_ell-dimension of H^{p,q} in the given profile.
inline int h_dim(const Profile& pr, int p, int q) {
  return pr.allows(p, q - p) ? 1 : 0;
}

}  // namespace msing

#endif  // MSING_COEFF_HPP
