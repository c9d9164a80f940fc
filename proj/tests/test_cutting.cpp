#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rmill/cutting.hpp"

#include <random>

using namespace rmill;

namespace {

CuttingParams table_params() {
  CuttingParams p;
  p.k0 = 5e6;
  p.hs = 1.8e-5;
  p.r = 0.1;
  p.kr = 0.3;
  p.ap = 2e-3;
  p.R = 0.01;
  p.Nz = 4;
  p.omega = 8000.0;
  p.vf = 4.0;
  return p;
}

}  // namespace

TEST_CASE("fractional force law") {
  const CuttingParams p = table_params();

  CHECK(fractional_force(-1e-5, p) == 0.0);
  CHECK(fractional_force(0.0, p) == 0.0);

  // h = hs: k0*ap*(1+r)/2
  const double at_hs = p.k0 * p.ap * (1.0 + p.r) / 2.0;
  CHECK(fractional_force(p.hs, p) == doctest::Approx(at_hs).epsilon(1e-15));
  CHECK(at_hs == doctest::Approx(5.5e3).epsilon(1e-12));

  SUBCASE("continuous, nonnegative, strictly increasing for h >= 0") {
    double prev = 0.0;
    for (int i = 1; i <= 400; ++i) {
      const double h = i * 2.5e-7;
      const double f = fractional_force(h, p);
      CHECK(f > prev);
      prev = f;
    }
    CHECK(fractional_force(1e-12, p) < 1e-2);  // continuity at zero
  }

  SUBCASE("large-chip asymptote approaches r") {
    const double u = 1e6;
    const double f = fractional_force(u * p.hs, p);
    CHECK(f / (p.k0 * p.ap * u * p.hs / p.hs) ==
          doctest::Approx(p.r).epsilon(1e-5));
  }
}

TEST_CASE("radial force ratio") {
  const CuttingParams p = table_params();
  CHECK(radial_force(0.0, p) == 0.0);
  CHECK(radial_force(100.0, p) == doctest::Approx(30.0).epsilon(1e-15));
  std::mt19937 rng(107);
  std::uniform_real_distribution<double> dist(0.0, 500.0);
  for (int i = 0; i < 20; ++i) {
    const double a = dist(rng), b = dist(rng);
    CHECK(radial_force(a + b, p) ==
          doctest::Approx(radial_force(a, p) + radial_force(b, p))
              .epsilon(1e-12));
  }
}

TEST_CASE("tool frame force resolution") {
  const CuttingParams p = table_params();

  SUBCASE("no engaged teeth") {
    std::vector<ToothState> teeth(4);
    const Eigen::Vector2d f = tool_frame_force(teeth, p);
    CHECK(f.norm() == 0.0);
  }

  SUBCASE("single tooth at phi = 0 gives (-F_r, F_t)") {
    const double h = 4e-5;
    std::vector<ToothState> teeth{{0, 0.0, h, true}};
    const double ft = fractional_force(h, p);
    const double fr = radial_force(ft, p);
    const Eigen::Vector2d f = tool_frame_force(teeth, p);
    CHECK(f.x() == doctest::Approx(-fr).epsilon(1e-15));
    CHECK(f.y() == doctest::Approx(ft).epsilon(1e-15));
  }

  SUBCASE("opposite teeth with equal chip cancel") {
    const double h = 6e-5;
    for (double phi : {0.3, 1.1, 2.4}) {
      std::vector<ToothState> teeth{{0, phi, h, true},
                                    {1, phi + M_PI, h, true}};
      const Eigen::Vector2d f = tool_frame_force(teeth, p);
      CHECK(f.norm() < 1e-12 * fractional_force(h, p));
    }
  }

  SUBCASE("additive over disjoint tooth sets and norm bound") {
    std::mt19937 rng(109);
    std::uniform_real_distribution<double> hdist(0.0, 2e-4);
    std::uniform_real_distribution<double> adist(0.0, 2.0 * M_PI);
    std::vector<ToothState> all;
    double ft_sum = 0;
    for (int i = 0; i < 4; ++i) {
      ToothState t{i, adist(rng), hdist(rng), true};
      all.push_back(t);
      ft_sum += fractional_force(t.h, p);
    }
    const Eigen::Vector2d f_all = tool_frame_force(all, p);
    const Eigen::Vector2d f_split =
        tool_frame_force({all[0], all[1]}, p) +
        tool_frame_force({all[2], all[3]}, p);
    CHECK((f_all - f_split).norm() < 1e-12 * std::max(1.0, f_all.norm()));
    CHECK(f_all.norm() <= ft_sum * std::sqrt(1.0 + p.kr * p.kr) + 1e-12);
  }

  SUBCASE("wrench layout") {
    const Vector6d F = tool_wrench({3.0, -4.0});
    CHECK(F[0] == 3.0);
    CHECK(F[1] == -4.0);
    CHECK(F.tail<4>().norm() == 0.0);
  }
}

TEST_CASE("tooth positions") {
  const CuttingParams p = table_params();

  const auto at0 = tooth_positions(p, 0.0);
  REQUIRE(at0.size() == 4);
  CHECK(at0[0] == doctest::Approx(0.0));
  CHECK(at0[1] == doctest::Approx(M_PI / 2).epsilon(1e-12));
  CHECK(at0[2] == doctest::Approx(M_PI).epsilon(1e-12));
  CHECK(at0[3] == doctest::Approx(3 * M_PI / 2).epsilon(1e-12));

  // one full revolution returns the initial angles
  const double T = 60.0 / p.omega;
  const auto after = tooth_positions(p, T);
  for (int i = 0; i < 4; ++i) {
    double d = std::abs(after[i] - at0[i]);
    d = std::min(d, 2.0 * M_PI - d);
    CHECK(d < 1e-9);
  }

  // tooth-passing period
  CHECK(p.tooth_period() == doctest::Approx(1.875e-3).epsilon(1e-12));
  CHECK(p.feed_per_tooth() == doctest::Approx(1.25e-4).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
  CuttingParams p = table_params();
  p.r = 1.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = table_params();
  p.Nz = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = table_params();
  CHECK_NOTHROW(p.validate());
}
