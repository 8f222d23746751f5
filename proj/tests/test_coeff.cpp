#include <catch2/catch_amalgamated.hpp>

#include "msing/coeff.hpp"

using namespace msing;

static const Profile TRIV2{2, ProfileKind::Trivial};
static const Profile TRIV3{3, ProfileKind::Trivial};
static const Profile CPX{2, ProfileKind::Complex};
static const Profile REAL{2, ProfileKind::Real};

TEST_CASE("profile validation") {
  CHECK_THROWS(Profile{3, ProfileKind::Real}.validate());
  CHECK_THROWS(Profile{3, ProfileKind::Complex}.validate());
  CHECK_NOTHROW(TRIV3.validate());
}

TEST_CASE("monomials vanish per profile") {
  CHECK(HElem(TRIV2, 0, 1, 1).zero());   // tau = 0
  CHECK(HElem(CPX, 1, 0, 1).zero());     // rho = 0
  CHECK_FALSE(HElem(CPX, 0, 3, 1).zero());
  CHECK_FALSE(HElem(REAL, 2, 1, 1).zero());
  CHECK(HElem(TRIV3, 0, 0, 3).zero());   // coefficient reduces to 0
}

TEST_CASE("product and bidegrees") {
  HElem x(REAL, 1, 2, 1), y(REAL, 0, 1, 1);
  HElem z = h_mul(x, y);
  CHECK(z.a() == 1);
  CHECK(z.b() == 3);
  CHECK(z.p() == 1);
  CHECK(z.q() == 4);
  CHECK(h_dim(REAL, 1, 4) == 1);
  CHECK(h_dim(REAL, 2, 1) == 0);  // would need b < 0
  CHECK(h_dim(CPX, 1, 1) == 0);
  CHECK(h_dim(CPX, 0, 5) == 1);
  CHECK(h_dim(TRIV2, 0, 0) == 1);
  CHECK(h_dim(TRIV2, 0, 1) == 0);
}

TEST_CASE("Bockstein is a derivation with beta(tau) = rho") {
  HElem tau(REAL, 0, 1, 1), rho(REAL, 1, 0, 1);
  CHECK(h_beta(tau) == rho);
  CHECK(h_beta(rho).zero());
  // beta(tau^2) = 2 rho tau = 0 mod 2
  CHECK(h_beta(HElem(REAL, 0, 2, 1)).zero());
  // beta(tau^3) = 3 rho tau^2 = rho tau^2
  CHECK(h_beta(HElem(REAL, 0, 3, 1)) == HElem(REAL, 1, 2, 1));
  CHECK(h_beta(HElem(CPX, 0, 1, 1)).zero());
}

TEST_CASE("printing") {
  CHECK(HElem(REAL, 2, 1, 1).str() == "r^2*T");
  CHECK(HElem(REAL, 0, 0, 1).str() == "1");
  CHECK(HElem(TRIV2, 0, 0, 0).str() == "0");
}
