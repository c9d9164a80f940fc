#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rmill/cutting.hpp"
#include "rmill/workpiece_grid.hpp"

#include <cmath>
#include <random>

using namespace rmill;

TEST_CASE("grid initialization") {
  const Eigen::Vector2d lo(0, 0), hi(0.01, 0.005);
  const double ds = 2e-4;

  SUBCASE("full rectangle marks every node") {
    WorkpieceGrid g = init_grid_rect(lo, hi, ds, ds, lo, hi);
    CHECK(g.occupied_count() == g.node_count());
  }

  SUBCASE("empty region marks nothing") {
    WorkpieceGrid g = init_grid_rect(lo, hi, ds, ds, {1, 1}, {2, 2});
    CHECK(g.occupied_count() == 0);
  }

  SUBCASE("half plane count matches exactly") {
    const double split = 0.004;
    WorkpieceGrid g = init_grid(lo, hi, ds, ds,
                                [&](double x, double) { return x <= split; });
    std::int64_t expected = 0;
    for (int ix = 0; ix < g.nx(); ++ix)
      if (g.node_x(ix) <= split) expected += g.ny();
    CHECK(g.occupied_count() == expected);
  }

  SUBCASE("degenerate grids are rejected") {
    CHECK_THROWS_AS(init_grid_rect(lo, {-1, -1}, ds, ds, lo, hi), ConfigError);
    CHECK_THROWS_AS(init_grid_rect(lo, hi, -ds, ds, lo, hi), ConfigError);
  }
}

TEST_CASE("sweep removal basics") {
  const double R = 0.01;
  const Eigen::Vector2d center(0.0, 0.0);

  SUBCASE("sweep outside material removes nothing") {
    WorkpieceGrid g = init_grid_rect({-0.05, -0.05}, {0.05, 0.05}, 1e-3, 1e-3,
                                     {0.03, -0.05}, {0.05, 0.05});
    ToothSweep sweep{center, center, 0.0, 0.3, R};
    CHECK(sweep_and_remove(g, sweep) == 0.0);
    CHECK(g.occupied_count() > 0);
  }

  SUBCASE("sweep over one material node removes one cell") {
    WorkpieceGrid g = init_grid({-0.05, -0.05}, {0.05, 0.05}, 1e-3, 1e-3,
                                [](double x, double y) {
                                  return std::abs(x - 0.005) < 4e-4 &&
                                         std::abs(y - 0.005) < 4e-4;
                                });
    REQUIRE(g.occupied_count() == 1);
    // node at (0.005, 0.005): angle atan2(x, y) = pi/4, radius ~7.1 mm
    ToothSweep sweep{center, center, M_PI / 4 - 0.05, M_PI / 4 + 0.05, R};
    const double area = sweep_and_remove(g, sweep);
    CHECK(area == doctest::Approx(1e-6).epsilon(1e-12));
    CHECK(g.occupied_count() == 0);
  }

  SUBCASE("material monotonicity and exact area bookkeeping") {
    WorkpieceGrid g = init_grid_rect({-0.05, -0.05}, {0.05, 0.05}, 5e-4, 5e-4,
                                     {-0.02, -0.02}, {0.02, 0.02});
    const std::int64_t before = g.occupied_count();
    double removed = 0;
    std::mt19937 rng(113);
    std::uniform_real_distribution<double> adist(0.0, 2.0 * M_PI);
    double phi = adist(rng);
    for (int s = 0; s < 50; ++s) {
      const double next = phi + 0.12;
      ToothSweep sweep{center, center, phi, next, R};
      removed += sweep_and_remove(g, sweep);
      phi = next;
      CHECK(g.occupied_count() <= before);
    }
    CHECK(removed ==
          doctest::Approx((before - g.occupied_count()) * g.cell_area())
              .epsilon(1e-12));
  }

  SUBCASE("removal order does not matter for disjoint sweeps") {
    auto make = [] {
      return init_grid_rect({-0.05, -0.05}, {0.05, 0.05}, 5e-4, 5e-4,
                            {-0.03, -0.03}, {0.03, 0.03});
    };
    WorkpieceGrid a = make();
    WorkpieceGrid b = make();
    ToothSweep s1{center, center, 0.1, 0.5, R};
    ToothSweep s2{center, center, 2.0, 2.4, R};
    const double a1 = sweep_and_remove(a, s1);
    const double a2 = sweep_and_remove(a, s2);
    const double b2 = sweep_and_remove(b, s2);
    const double b1 = sweep_and_remove(b, s1);
    CHECK(a1 == b1);
    CHECK(a2 == b2);
    CHECK(a.occupied_count() == b.occupied_count());
  }
}

TEST_CASE("slot pass conserves the swept area") {
  // drive a 4-tooth cutter through virgin stock and compare the removed
  // total to the exact swept-region area
  CuttingParams p;
  p.k0 = 5e6;
  p.hs = 1.8e-5;
  p.r = 0.1;
  p.kr = 0.3;
  p.ap = 1e-4;
  p.R = 0.01;
  p.Nz = 4;
  p.omega = 8000.0;
  p.vf = 4.0;

  const double ds = p.feed_per_tooth() / 4.0;
  const double slot_len = 0.03;
  const Eigen::Vector2d start(0.0, 0.0);
  // stock spans the whole swept band so the area identity is exact
  WorkpieceGrid g = init_grid_rect(
      {start.x() - 2 * p.R, -2 * p.R}, {start.x() + slot_len + 2 * p.R, 2 * p.R},
      ds, ds, {start.x() - 1.5 * p.R, -1.5 * p.R},
      {start.x() + slot_len + 1.5 * p.R, 1.5 * p.R});

  const double dt = 2e-5;
  const double feed = p.feed_speed();
  const double t_cut = slot_len / feed;
  const double t_end = t_cut + 2.0 * p.tooth_period();  // spin-out dwell
  double removed = 0;
  std::vector<double> phi = tooth_positions(p, 0.0);
  Eigen::Vector2d pos = start;
  for (double t = dt; t <= t_end + 0.5 * dt; t += dt) {
    const Eigen::Vector2d next(start.x() + feed * std::min(t, t_cut), 0.0);
    const std::vector<double> phi_next = tooth_positions(p, t);
    for (int i = 0; i < p.Nz; ++i) {
      ToothSweep sweep{pos, next, phi[i], phi_next[i], p.R};
      removed += sweep_and_remove(g, sweep);
    }
    pos = next;
    phi = phi_next;
  }

  const double exact = 2.0 * p.R * slot_len + M_PI * p.R * p.R;
  const double bound = 2.0 * ds * (slot_len + 2.0 * p.R) +
                       2.0 * ds * (2.0 * M_PI * p.R);
  CHECK(std::abs(removed - exact) < bound);
}

TEST_CASE("chip thickness estimate") {
  CHECK(chip_thickness(0.0, 0.01, 0.1) == 0.0);
  const double h = 7e-5, R = 0.01, dphi = 0.05;
  CHECK(chip_thickness(R * dphi * h, R, dphi) ==
        doctest::Approx(h).epsilon(1e-15));
  CHECK_THROWS_AS(chip_thickness(1e-6, R, 0.0), ConfigError);
  CHECK(chip_thickness(1e-6, R, 0.1) >= 0.0);
}

TEST_CASE("machined profile") {
  const double ds = 2.5e-4;

  SUBCASE("virgin stock reports the stock boundary") {
    WorkpieceGrid g = init_grid_rect({0, -0.01}, {0.02, 0.01}, ds, ds,
                                     {0, -0.005}, {0.02, 0.005});
    const auto profile = machined_profile(g, 0.0, +1);
    REQUIRE(!profile.empty());
    for (const auto& pt : profile)
      CHECK(pt.y == doctest::Approx(0.005 + 0.5 * ds).epsilon(1e-9));
  }

  SUBCASE("straight slot wall is flat within one grid step") {
    WorkpieceGrid g = init_grid_rect({0, -0.01}, {0.04, 0.01}, ds, ds,
                                     {0, -0.01}, {0.04, 0.01});
    // carve |y| < 4 mm with plain disk stamps marching in x
    const double R = 0.004;
    for (double cx = 0.008; cx <= 0.032; cx += 2e-4) {
      for (double phi = 0.0; phi < 2.0 * M_PI; phi += 0.09) {
        ToothSweep sweep{{cx - 2e-4, 0}, {cx, 0}, phi, phi + 0.1, R};
        sweep_and_remove(g, sweep);
      }
    }
    const auto profile = machined_profile(g, 0.0, +1);
    double lo = 1e9, hi = -1e9;
    for (const auto& pt : profile) {
      if (pt.x < 0.013 || pt.x > 0.027) continue;
      lo = std::min(lo, pt.y);
      hi = std::max(hi, pt.y);
      // wall edges sit on the half-step lattice of the grid
      const double rel = (pt.y - g.origin().y()) / ds - 0.5;
      CHECK(std::abs(rel - std::round(rel)) < 1e-9);
    }
    CHECK(hi - lo <= ds + 1e-12);
    CHECK(hi == doctest::Approx(R).epsilon(0.1));
  }
}
