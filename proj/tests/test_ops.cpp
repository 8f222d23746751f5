#include <catch2/catch_amalgamated.hpp>

#include "msing/ops.hpp"

using namespace msing;

static const Profile TRIV2{2, ProfileKind::Trivial};
static const Profile TRIV3{3, ProfileKind::Trivial};
static const Profile CPX{2, ProfileKind::Complex};
static const Profile REALP{2, ProfileKind::Real};

TEST_CASE("Q_0 squares to zero in A(0)") {
  for (const Profile& pr : {TRIV2, CPX, REALP, TRIV3}) {
    MilnorElem q0 = milnor_Q(pr, AlgTag::an(0), 0);
    CHECK(milnor_mul(q0, q0).zero());
  }
}

TEST_CASE("Sq1 Sq2 = Sq3") {
  for (const Profile& pr : {TRIV2, CPX, REALP}) {
    AlgTag a1 = AlgTag::an(1);
    CHECK(milnor_mul(milnor_Sq(pr, a1, 1), milnor_Sq(pr, a1, 2)) ==
          milnor_Sq(pr, a1, 3));
    CHECK(milnor_mul(milnor_Sq(pr, a1, 1), milnor_Sq(pr, a1, 1)).zero());
  }
}

TEST_CASE("Sq2 Sq2 = tau Sq3 Sq1") {
  for (const Profile& pr : {CPX, REALP}) {
    AlgTag a1 = AlgTag::an(1);
    MilnorElem lhs = milnor_mul(milnor_Sq(pr, a1, 2), milnor_Sq(pr, a1, 2));
    MilnorElem rhs = milnor_mul(milnor_Sq(pr, a1, 3), milnor_Sq(pr, a1, 1));
    MilnorElem trhs(pr, a1);
    trhs.add_scaled(rhs, HPoly::mono(pr, 0, 1));
    CHECK(lhs == trhs);
  }
  // trivial profile: tau = 0, so Sq2 Sq2 = 0
  AlgTag a1 = AlgTag::an(1);
  CHECK(milnor_mul(milnor_Sq(TRIV2, a1, 2), milnor_Sq(TRIV2, a1, 2)).zero());
}

TEST_CASE("[P_n^0, Q_0] = Q_n") {
  for (const Profile& pr : {TRIV2, REALP, TRIV3})
    for (int n = 1; n <= 3; ++n) {
      if (pr.ell == 3 && n == 3) continue;  // keep the suite fast
      AlgTag an = AlgTag::an(n);
      MilnorElem pn0 = milnor_Pij(pr, an, n, 0);
      MilnorElem q0 = milnor_Q(pr, an, 0);
      MilnorElem comm = milnor_mul(pn0, q0);
      comm.add(milnor_mul(q0, pn0), -1);
      CHECK(comm == milnor_Q(pr, an, n));
    }
}

TEST_CASE("commutator with coefficients: [beta, tau] = rho") {
  MilnorElem q0 = milnor_Q(REALP, AlgTag::an(0), 0);
  HElem tau(REALP, 0, 1, 1), rho(REALP, 1, 0, 1);
  CHECK(commutator_with_h(q0, tau) == h_times(REALP, AlgTag::an(0), rho));
  CHECK(commutator_with_h(q0, rho).zero());
  CHECK(commutator_with_h(q0, HElem::unit(REALP)).zero());
  // cross-check against the coefficient Bockstein
  CHECK(h_beta(tau) == rho);
}

TEST_CASE("associativity on A(1) basis (REAL, ell = 2)") {
  AlgTag a1 = AlgTag::an(1);
  auto basis = monos_up_to_degree(REALP, a1, 100);
  REQUIRE(basis.size() == 8);
  for (auto& m1 : basis)
    for (auto& m2 : basis)
      for (auto& m3 : basis) {
        MilnorElem x = MilnorElem::sym(REALP, a1, m1);
        MilnorElem y = MilnorElem::sym(REALP, a1, m2);
        MilnorElem z = MilnorElem::sym(REALP, a1, m3);
        CHECK(milnor_mul(milnor_mul(x, y), z) == milnor_mul(x, milnor_mul(y, z)));
      }
}

TEST_CASE("bimodule actions on B(0) and B(1)") {
  for (const Profile& pr : {TRIV2, REALP}) {
    AlgTag b0 = AlgTag::bn(0);
    // Q_0 * P^{-1} = beta P^{-1}
    MilnorElem lhs = act_left(milnor_Q(pr, AlgTag::an(0), 0), milnor_P(pr, b0, -1));
    CHECK(lhs == milnor_bP(pr, b0, 1, -1));
    // unit acts as identity
    AlgTag b1 = AlgTag::bn(1);
    for (int r : {-2, -1, 0, 1}) {
      MilnorElem x = milnor_bP(pr, b1, 1, r);
      CHECK(act_left(MilnorElem::unit(pr, AlgTag::an(1)), x) == x);
      CHECK(act_right(x, MilnorElem::unit(pr, AlgTag::an(0))) == x);
    }
  }
}

TEST_CASE("action and projection to C(n) are compatible") {
  AlgTag b1 = AlgTag::bn(1), c1 = AlgTag::cn(1);
  MilnorElem sq2 = milnor_Sq(REALP, AlgTag::an(1), 2);
  for (int r : {0, 1, 2}) {
    MilnorElem xb = milnor_P(REALP, b1, r);
    MilnorElem xc = milnor_P(REALP, c1, r);
    CHECK(b_to_c(act_left(sq2, xb)) == act_left(sq2, xc));
  }
  // b_to_c kills negative r_1
  CHECK(b_to_c(milnor_P(REALP, b1, -1)).zero());
  CHECK(b_to_c(milnor_Sq(REALP, b1, 3)) == milnor_Sq(REALP, c1, 3));
}

TEST_CASE("bimodule axiom samples: (a x) b = a (x b)") {
  AlgTag b1 = AlgTag::bn(1);
  MilnorElem a = milnor_Sq(REALP, AlgTag::an(1), 2);
  MilnorElem b = milnor_Q(REALP, AlgTag::an(0), 0);
  for (int r : {-2, -1, 0, 1}) {
    MilnorElem x = milnor_P(REALP, b1, r);
    CHECK(act_right(act_left(a, x), b) == act_left(a, act_right(x, b)));
  }
}

TEST_CASE("decompose_left_An") {
  for (const Profile& pr : {TRIV2, REALP}) {
    AlgTag b1 = AlgTag::bn(1);
    // P^{ell^n} is a basis generator
    auto d = decompose_left_An(milnor_P(pr, b1, 2));
    REQUIRE(d.size() == 1);
    CHECK(d[0].second == 2);
    CHECK(d[0].first == MilnorElem::unit(pr, AlgTag::an(1)));
    // the element P^1 * P^0 decomposes as [(P^1, 0)]
    auto d2 = decompose_left_An(
        act_left(milnor_P(pr, AlgTag::an(1), 1), milnor_P(pr, b1, 0)));
    REQUIRE(d2.size() == 1);
    CHECK(d2[0].second == 0);
    CHECK(d2[0].first == milnor_P(pr, AlgTag::an(1), 1));
    // beta P^{-2} = beta * P^{-2}
    auto d3 = decompose_left_An(milnor_bP(pr, b1, 1, -2));
    REQUIRE(d3.size() == 1);
    CHECK(d3[0].second == -2);
    CHECK(d3[0].first == milnor_Q(pr, AlgTag::an(1), 0));
    // round-trip: reassemble
    for (int e : {0, 1})
      for (int r : {-2, -1, 1, 3}) {
        MilnorElem x = milnor_bP(pr, b1, e, r);
        auto dd = decompose_left_An(x);
        MilnorElem back(pr, b1);
        for (auto& [ai, ri] : dd) back.add(act_left(ai, milnor_P(pr, b1, ri)));
        CHECK(back == x);
      }
  }
}

TEST_CASE("decompose_right_An1") {
  for (const Profile& pr : {TRIV2, REALP}) {
    AlgTag b1 = AlgTag::bn(1);
    auto d = decompose_right_An1(milnor_bP(pr, b1, 1, -3));
    REQUIRE(d.size() == 1);
    CHECK(d[0].first == std::make_pair(1, -3));
    CHECK(d[0].second == MilnorElem::unit(pr, AlgTag::an(0)));
    // right-linearity: decompose(x b) = decompose(x) * b
    MilnorElem q0 = milnor_Q(pr, AlgTag::an(0), 0);
    for (int r : {-2, 0, 1}) {
      MilnorElem x = milnor_P(pr, b1, r);
      auto dx = decompose_right_An1(act_right(x, q0));
      MilnorElem back(pr, b1);
      for (auto& [er, bi] : dx)
        back.add(act_right(milnor_bP(pr, b1, er.first, er.second), bi));
      CHECK(back == act_right(x, q0));
    }
    // round-trip on a symbol with higher entries
    Mono m;  // rho(E = tau_1, R = (-1))
    m.E = 2;
    m.set_r(1, -1);
    MilnorElem x = MilnorElem::sym(pr, b1, m);
    auto dd = decompose_right_An1(x);
    MilnorElem back(pr, b1);
    for (auto& [er, bi] : dd)
      back.add(act_right(milnor_bP(pr, b1, er.first, er.second), bi));
    CHECK(back == x);
  }
}
