#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "hypersens/classical_model.hpp"
#include "hypersens/errors.hpp"

using namespace hypersens;
using hypersens::testing::Gen;
using hypersens::testing::case_seed;

namespace {

CellModelParams params(double K, double t, double t0, int F, double tol) {
  CellModelParams p;
  p.K = K;
  p.t = t;
  p.t0 = t0;
  p.F = F;
  p.delta_H_tol = tol;
  return p;
}

}  // namespace

TEST_SUITE("classical_model") {

TEST_CASE("occupied cells") {
  CHECK(occupied_cells(1.7, 2.5, 2.5) == 1.0);
  CHECK(occupied_cells(1.0, 5.0, 2.0) == 8.0);
  CHECK(occupied_cells(0.0, 100.0, 1.0) == 1.0);
  CHECK_THROWS_AS(occupied_cells(1.0, 1.0, 2.0), InvalidParameter);
  CHECK_THROWS_AS(occupied_cells(-1.0, 3.0, 2.0), InvalidParameter);
}

TEST_CASE("entropy increase") {
  CHECK(classical_entropy_increase(3.0, 0.0) == 0.0);
  CHECK(classical_entropy_increase(2.0, 5.0) == 10.0);
  const double h = 1e-3;
  CHECK((classical_entropy_increase(1.3, 4 + h) - classical_entropy_increase(1.3, 4)) / h ==
        doctest::Approx(1.3).epsilon(1e-9));
}

TEST_CASE("required information examples") {
  const auto a = required_information(params(1.0, 3.0, 0.0, 1, 1.0));
  CHECK(a.cells == 8.0);
  CHECK(a.delta_H_S == 3.0);
  CHECK(a.bits == 16.0);
  CHECK(a.coarse_volume_factor == 2.0);
  CHECK(a.valid);
  CHECK(required_information(params(1.0, 3.0, 0.0, 1, 3.0)).bits == 0.0);
  CHECK_FALSE(required_information(params(1.0, 3.0, 0.0, 2, 1.0)).valid);  // tol/F = 0.5
  CHECK_THROWS_AS(required_information(params(1.0, 3.0, 0.0, 1, 3.5)), InvalidParameter);
  CHECK_THROWS_AS(required_information(params(1.0, 3.0, 0.0, 0, 1.0)), InvalidParameter);
}

TEST_CASE("validity flag flips at tol / F = 1") {
  for (int F : {1, 2, 3, 5}) {
    const double at = static_cast<double>(F);
    CHECK(required_information(params(2.0, 10.0, 0.0, F, at)).valid);
    CHECK_FALSE(required_information(params(2.0, 10.0, 0.0, F, std::nextafter(at, 0.0))).valid);
  }
}

TEST_CASE("hypersensitivity law equals occupied cells") {
  Gen gen(case_seed(71, 0));
  for (int c = 0; c < 100; ++c) {
    const double K = gen.real(0.0, 3.0);
    const double t0 = gen.real(0.0, 5.0);
    const double t = t0 + gen.real(0.0, 10.0);
    const double tol = gen.real(0.0, K * t);
    const auto p = params(K, t, t0, gen.integer(1, 4), tol);
    CHECK(hypersensitivity_law(p) == occupied_cells(K, t, t0));
  }
  CHECK(hypersensitivity_law(params(0.0, 7.0, 1.0, 1, 0.0)) == 1.0);
  const double r1 = hypersensitivity_law(params(0.8, 4.0, 1.0, 1, 0.5));
  const double r2 = hypersensitivity_law(params(0.8, 7.0, 1.0, 1, 0.5));
  CHECK(r2 == doctest::Approx(r1 * r1).epsilon(1e-14));
}

TEST_CASE("required information is linear in the entropy margin") {
  Gen gen(case_seed(72, 0));
  for (int c = 0; c < 100; ++c) {
    const double K = gen.real(0.1, 3.0);
    const double t = gen.real(1.0, 10.0);
    const auto base = params(K, t, gen.real(0.0, 1.0), 1, 0.0);
    const double hs = K * t;
    const double tol1 = gen.real(0.0, hs);
    const double tol2 = gen.real(0.0, hs);
    auto p1 = base, p2 = base;
    p1.delta_H_tol = tol1;
    p2.delta_H_tol = tol2;
    const auto a = required_information(p1);
    const auto b = required_information(p2);
    CHECK(a.bits / a.cells == doctest::Approx(hs - tol1).epsilon(1e-12));
    CHECK(a.bits - b.bits == doctest::Approx(a.cells * (tol2 - tol1)).epsilon(1e-9));
  }
}

TEST_CASE("sub-exponential growth gives sub-exponential ratio") {
  const double p = 2.0;
  const CellGrowth power = [p](double t) { return std::pow(t, p); };
  double prev_log_ratio = std::log2(hypersensitivity_law(params(1.0, 1.0, 0.0, 1, 1.0), power));
  for (double t = 10.0; t <= 1000.0; t *= 10.0) {
    const double r = hypersensitivity_law(params(1.0, t, 0.0, 1, 1.0), power);
    CHECK(r == doctest::Approx(std::pow(t, p)));
    // each decade adds p log2 10 bits, where exponential growth would add 0.9 K t
    CHECK(std::log2(r) - prev_log_ratio == doctest::Approx(p * std::log2(10.0)));
    prev_log_ratio = std::log2(r);
  }
  const auto info = required_information(params(1.0, 10.0, 0.0, 1, 2.0), power);
  CHECK(info.bits == doctest::Approx(100.0 * 8.0));
}

TEST_CASE("classical curve skips times with too little entropy") {
  const std::vector<double> times{0, 1, 2, 3, 4};
  const auto rows = classical_curve(params(1.0, 0.0, 0.0, 1, 2.0), times);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].t == 2.0);
  CHECK(rows[0].delta_I_min == 0.0);
  CHECK(rows[2].R == 16.0);
  CHECK(rows[2].ratio == 16.0);
  CHECK(rows[2].delta_I_min == 32.0);
}

}
