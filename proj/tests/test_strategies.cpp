#include "dpcjam/strategies.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace dpcjam;
using C = Component;

TEST_CASE("channel parameter validation") {
  ChannelParams ch;
  CHECK_NOTHROW(ch.validate());
  ch.sigma2 = 0.0;
  CHECK_THROWS_AS(ch.validate(), InvalidArgument);
  ch = {};
  ch.P_J = -1.0;
  CHECK_THROWS_AS(ch.validate(), InvalidArgument);
  ch = {};
  ch.n = 0;
  CHECK_THROWS_AS(ch.validate(), InvalidArgument);
  ch = {};
  ch.sigmaS2 = std::nan("");
  CHECK_THROWS_AS(ch.validate(), InvalidArgument);
  ch = {};
  ch.sigmaS2 = 0.0;
  ch.P_J = 0.0;
  CHECK_NOTHROW(ch.validate());
}

TEST_CASE("dpc coefficient and canonical user") {
  ChannelParams ch;
  CHECK(dpc_coefficient(ch) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  ch.P_U = 10;
  ch.P_J = 5;
  CHECK(dpc_coefficient(ch) == doctest::Approx(10.0 / 16.0).epsilon(1e-15));
  ch.n = 3;
  const auto user = dpc_user(ch);
  CHECK(user.power(ch) == doctest::Approx(30.0));
  const auto f = feasible(user, ch);
  CHECK(f.feasible);
  CHECK(f.slack == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(user.dpc_alpha.isApprox(0.625 * Matrix::Identity(3, 3)));
}

TEST_CASE("power accounting includes state coupling and jammer mean") {
  ChannelParams ch;
  ch.n = 2;
  ch.sigmaS2 = 2.0;
  ch.P_J = 3.0;
  JammerStrategy j{0.5 * Matrix::Identity(2, 2), Matrix::Identity(2, 2), Vector::Ones(2)};
  // tr(B B^T) sigmaS2 + tr(Lambda_R) + |mu|^2 = 0.5*2 + 2 + 2
  CHECK(j.power(ch) == doctest::Approx(5.0));
  CHECK(feasible(j, ch).feasible);
  CHECK(feasible(j, ch).slack == doctest::Approx(0.5));
  j.mean = 2.0 * Vector::Ones(2);
  CHECK_FALSE(feasible(j, ch).feasible);

  UserStrategy u{Matrix::Identity(2, 2), 0.5 * Matrix::Identity(2, 2), Matrix::Zero(2, 2)};
  ch.P_U = 2.0;
  CHECK(u.power(ch) == doctest::Approx(2 * 2.0 + 1.0));
  CHECK_FALSE(feasible(u, ch).feasible);
}

TEST_CASE("malformed strategies are reported not well formed") {
  ChannelParams ch;
  ch.n = 2;
  JammerStrategy j = iid_gaussian_jammer(ch);
  j.innovation_cov(0, 0) = -1.0;
  CHECK_FALSE(feasible(j, ch).well_formed);
  CHECK_FALSE(feasible(j, ch).feasible);
  UserStrategy u = dpc_user(ch);
  u.dpc_alpha = Matrix::Zero(3, 3);
  CHECK_FALSE(feasible(u, ch).well_formed);
}

TEST_CASE("linear jammer budget") {
  ChannelParams ch;
  CHECK(max_innovation_power(ch, 0.5) == doctest::Approx(0.75));
  const auto j = linear_jammer(ch, 0.5, 0.75);
  CHECK(feasible(j, ch).feasible);
  CHECK_THROWS_AS(linear_jammer(ch, 0.5, 0.8), InfeasiblePower);
  CHECK_THROWS_AS(linear_jammer(ch, 0.0, -0.1), InvalidArgument);
}

TEST_CASE("property: random strategies are feasible and deterministic in seed") {
  for (int n : {1, 2, 3, 4}) {
    ChannelParams ch;
    ch.n = n;
    ch.P_U = 1.5;
    ch.P_J = 0.7;
    ch.sigmaS2 = 2.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto u = random_feasible_user(ch, seed);
      const auto j = random_feasible_jammer(ch, seed);
      CHECK(feasible(u, ch).feasible);
      CHECK(feasible(j, ch).feasible);
      CHECK(linalg::is_psd(u.innovation_cov));
      CHECK(linalg::is_psd(j.innovation_cov));
    }
    const auto a = random_feasible_jammer(ch, 99);
    const auto b = random_feasible_jammer(ch, 99);
    CHECK(a.state_coupling == b.state_coupling);
    CHECK(a.innovation_cov == b.innovation_cov);
    CHECK_FALSE(random_feasible_user(ch, 1).innovation_cov == random_feasible_user(ch, 2).innovation_cov);
  }
}

TEST_CASE("seed-averaged random power is within 5% of the announced fraction") {
  ChannelParams ch;
  ch.n = 2;
  ch.P_U = 2.0;
  ch.P_J = 3.0;
  double user_fraction = 0.0;
  double jammer_fraction = 0.0;
  constexpr int kDraws = 10000;
  for (int seed = 0; seed < kDraws; ++seed) {
    user_fraction += random_feasible_user(ch, seed).power(ch) / (ch.n * ch.P_U);
    jammer_fraction += random_feasible_jammer(ch, seed).power(ch) / (ch.n * ch.P_J);
  }
  CHECK(user_fraction / kDraws == doctest::Approx(kRandomPowerFraction).epsilon(0.05));
  CHECK(jammer_fraction / kDraws == doctest::Approx(kRandomPowerFraction).epsilon(0.05));
}

TEST_CASE("assembled scalar joint covariance matches hand expansion") {
  ChannelParams ch;
  ch.P_U = 2.0;
  ch.P_J = 1.5;
  ch.sigma2 = 0.7;
  ch.sigmaS2 = 1.3;
  const double a = 0.4, b = -0.6, r = 1.5 - 0.36 * 1.3;
  auto j = linear_jammer(ch, b, r);
  j.mean = Vector::Constant(1, 0.0);
  const auto joint = assemble_joint(ch, dpc_user(ch, a), j);
  const oracle::Scalar o{2.0, 1.3, 0.7, a, b, r};
  CHECK(joint.block(C::U, C::U)(0, 0) == doctest::Approx(o.var_u()));
  CHECK(joint.block(C::Y, C::Y)(0, 0) == doctest::Approx(o.var_y()));
  CHECK(joint.block(C::U, C::Y)(0, 0) == doctest::Approx(o.cov_uy()));
  CHECK(joint.block(C::U, C::S)(0, 0) == doctest::Approx(o.cov_us()));
  CHECK(joint.block(C::J, C::S)(0, 0) == doctest::Approx(b * 1.3));
  // W = U - aY = (1-a)X - aJ - aZ
  const double var_w = (1 - a) * (1 - a) * 2.0 + a * a * (b * b * 1.3 + r) + a * a * 0.7;
  CHECK(joint.block(C::W, C::W)(0, 0) == doctest::Approx(var_w));
  const auto check = joint.check_channel_structure();
  CHECK(check.linear);
  CHECK(check.noise_uncorrelated);
}

TEST_CASE("jammer mean propagates to J, Y and W means only") {
  ChannelParams ch;
  ch.n = 2;
  ch.P_J = 2.0;
  JammerStrategy j{Matrix::Zero(2, 2), Matrix::Identity(2, 2), Vector::Constant(2, 0.5)};
  const double a = dpc_coefficient(ch);
  const auto joint = assemble_joint(ch, dpc_user(ch), j);
  CHECK(joint.mean(C::J).isApprox(Vector::Constant(2, 0.5)));
  CHECK(joint.mean(C::Y).isApprox(Vector::Constant(2, 0.5)));
  CHECK(joint.mean(C::W).isApprox(Vector::Constant(2, -a * 0.5)));
  CHECK(joint.mean(C::X).isZero());
}

TEST_CASE("assemble_joint rejects an indefinite innovation covariance") {
  ChannelParams ch;
  ch.n = 2;
  auto j = iid_gaussian_jammer(ch);
  j.innovation_cov << 1, 2, 2, 1;
  CHECK_THROWS_AS(assemble_joint(ch, dpc_user(ch), j), InvalidCovariance);
}

TEST_CASE("zero state variance and zero jammer power are legal") {
  ChannelParams ch;
  ch.sigmaS2 = 0.0;
  ch.P_J = 0.0;
  const auto j = random_feasible_jammer(ch, 5);
  CHECK(j.power(ch) == 0.0);
  const auto joint = assemble_joint(ch, dpc_user(ch), iid_gaussian_jammer(ch));
  CHECK(joint.block(C::S, C::S)(0, 0) == 0.0);
  CHECK(joint.block(C::Y, C::Y)(0, 0) == doctest::Approx(2.0));
}
