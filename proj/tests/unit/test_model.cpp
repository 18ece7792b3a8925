#include <doctest.h>

#include <cmath>
#include <random>

#include "cavspec/errors.hpp"
#include "cavspec/model.hpp"

using namespace cavspec;

TEST_CASE("build_from_splittings places the reference transition at zero") {
  const auto ladder = build_from_splittings(5.0, 10.0, {1.0, 1.0, 1.0});
  REQUIRE(ladder.size() == 3);
  CHECK(ladder.offsets[0] == -15.0);
  CHECK(ladder.offsets[1] == -10.0);
  CHECK(ladder.offsets[2] == 0.0);
  CHECK(ladder.labels[0] == "|2>");
  CHECK(ladder.labels[2] == "|4>");
}

TEST_CASE("build_from_splittings works in MHz just as well") {
  const auto ladder = build_from_splittings(31.7, 60.3, {6.07, 6.07, 6.07});
  CHECK(std::abs(ladder.offsets[0] - (-92.0)) < 1e-9);
  CHECK(std::abs(ladder.offsets[1] - (-60.3)) < 1e-12);
  CHECK(ladder.offsets[2] == 0.0);
}

TEST_CASE("build_from_splittings rejects degenerate inputs by name") {
  CHECK_THROWS_WITH_AS(build_from_splittings(0.0, 10.0, {1, 1, 1}),
                       doctest::Contains("delta23"), ValidationError);
  CHECK_THROWS_WITH_AS(build_from_splittings(5.0, -1.0, {1, 1, 1}),
                       doctest::Contains("delta34"), ValidationError);
  CHECK_THROWS_WITH_AS(build_from_splittings(5.0, 10.0, {1, -1, 1}),
                       doctest::Contains("gammas[1]"), ValidationError);
}

TEST_CASE("ladder offsets are strictly increasing with maximum exactly zero") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> split(1e-3, 50.0);
  for (int i = 0; i < 500; ++i) {
    const auto ladder = build_from_splittings(split(rng), split(rng), {1, 1, 1});
    CHECK(ladder.offsets[0] < ladder.offsets[1]);
    CHECK(ladder.offsets[1] < ladder.offsets[2]);
    CHECK(ladder.offsets[2] == 0.0);
  }
}

TEST_CASE("unit conversion is an exact linear rescaling") {
  const auto q = convert({5.0, Unit::Gamma}, Unit::MHz, 6.07);
  CHECK(std::abs(q.value - 30.35) < 1e-12);
  CHECK(q.unit == Unit::MHz);

  const auto same = convert({10.0, Unit::MHz}, Unit::MHz, 123.0);
  CHECK(same.value == 10.0);

  CHECK_THROWS_AS(convert({1.0, Unit::Gamma}, Unit::MHz, 0.0), ValidationError);
  CHECK_THROWS_AS(convert({1.0, Unit::Gamma}, Unit::MHz, -2.0), ValidationError);
}

TEST_CASE("unit round trip is the identity to machine precision") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> val(-1e4, 1e4);
  std::uniform_real_distribution<double> cal(1e-3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = val(rng);
    const double g = cal(rng);
    const auto there = convert({x, Unit::MHz}, Unit::Gamma, g);
    const auto back = convert(there, Unit::MHz, g);
    CHECK(std::abs(back.value - x) <= 1e-12 * std::abs(x));
  }
}

TEST_CASE("coupling_from_dipole scales as mu sqrt(omega/V)") {
  const double g0 = coupling_from_dipole(1.0, 1.0, 1.0);
  CHECK(std::abs(coupling_from_dipole(2.0, 1.0, 1.0) - 2.0 * g0) < 1e-9 * g0);
  CHECK(std::abs(coupling_from_dipole(1.0, 1.0, 4.0) - 0.5 * g0) < 1e-9 * g0);
  CHECK(std::abs(coupling_from_dipole(1.0, 4.0, 1.0) - 2.0 * g0) < 1e-9 * g0);

  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> pos(0.1, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double a = pos(rng), b = pos(rng), c = pos(rng);
    const double lhs = coupling_from_dipole(a * 1.0, b * 1.0, c * 1.0);
    const double rhs = a * std::sqrt(b / c) * g0;
    CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
  }

  CHECK_THROWS_AS(coupling_from_dipole(0.0, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(coupling_from_dipole(1.0, 1.0, 0.0), ValidationError);
}

TEST_CASE("scan grid validation and exact endpoints") {
  ScanGrid grid{-10.0, 10.0, 2};
  const auto dp = grid.sample();
  CHECK(dp.front() == -10.0);
  CHECK(dp.back() == 10.0);

  const ScanGrid too_few{0.0, 1.0, 1};
  CHECK_THROWS_WITH_AS(too_few.sample(), doctest::Contains("points"), ValidationError);
  const ScanGrid empty_range{1.0, 1.0, 10};
  CHECK_THROWS_AS(empty_range.sample(), ValidationError);
}

TEST_CASE("config-level length and sign validation") {
  SystemConfig cfg;
  cfg.ladder = build_from_splittings(5.0, 10.0, {1, 1, 1});
  cfg.coupling.strengths = {1.0, 1.0};  // wrong length
  cfg.cavity = {2.0, 0.0, 1.0};
  cfg.grid = {-10.0, 10.0, 11};
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("length"), ValidationError);

  cfg.coupling.strengths = {1.0, 1.0, -0.5};
  CHECK_THROWS_AS(cfg.validate(), ValidationError);

  cfg.coupling.strengths = {1.0, 1.0, 1.0};
  cfg.cavity.kappa = 0.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("kappa"), ValidationError);
}
