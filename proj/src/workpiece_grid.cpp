#include "rmill/workpiece_grid.hpp"

#include "rmill/cutting.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace rmill {

WorkpieceGrid::WorkpieceGrid(const Eigen::Vector2d& origin, double dsx,
                             double dsy, int nx, int ny)
    : origin_(origin), dsx_(dsx), dsy_(dsy), nx_(nx), ny_(ny) {
  if (dsx <= 0 || dsy <= 0) throw ConfigError("grid steps must be positive");
  if (nx < 1 || ny < 1) throw ConfigError("empty grid");
  words_per_row_ = (nx + 63) / 64;
  words_.assign(static_cast<std::size_t>(words_per_row_) * ny, 0);
}

void WorkpieceGrid::set(int ix, int iy, bool value) {
  const std::int64_t bit = bit_index(ix, iy);
  std::uint64_t& word = words_[bit >> 6];
  const std::uint64_t mask = std::uint64_t{1} << (bit & 63);
  const bool old = word & mask;
  if (old == value) return;
  if (value) {
    word |= mask;
    ++occupied_;
  } else {
    word &= ~mask;
    --occupied_;
  }
}

std::int64_t WorkpieceGrid::remove_if(
    int ix0, int ix1, int iy0, int iy1,
    const std::function<bool(double, double)>& inside) {
  ix0 = std::max(ix0, 0);
  iy0 = std::max(iy0, 0);
  ix1 = std::min(ix1, nx_ - 1);
  iy1 = std::min(iy1, ny_ - 1);
  if (ix0 > ix1 || iy0 > iy1) return 0;

  std::int64_t flipped = 0;
  for (int iy = iy0; iy <= iy1; ++iy) {
    const double y = node_y(iy);
    const std::int64_t row = static_cast<std::int64_t>(iy) * words_per_row_;
    for (std::int64_t w = row + (ix0 >> 6); w <= row + (ix1 >> 6); ++w) {
      std::uint64_t word = words_[w];
      if (!word) continue;
      const std::int64_t word_base = (w - row) * 64;
      // mask the word to the requested column range
      if (word_base < ix0)
        word &= ~std::uint64_t{0} << (ix0 - word_base);
      if (word_base + 63 > ix1)
        word &= ~std::uint64_t{0} >> (word_base + 63 - ix1);
      while (word) {
        const int bit = std::countr_zero(word);
        word &= word - 1;
        const int ix = static_cast<int>(word_base + bit);
        if (inside(node_x(ix), y)) {
          words_[w] &= ~(std::uint64_t{1} << bit);
          --occupied_;
          ++flipped;
        }
      }
    }
  }
  return flipped;
}

WorkpieceGrid init_grid(const Eigen::Vector2d& bounds_min,
                        const Eigen::Vector2d& bounds_max, double dsx,
                        double dsy,
                        const std::function<bool(double, double)>& material) {
  if (dsx <= 0 || dsy <= 0) throw ConfigError("grid steps must be positive");
  const int nx =
      static_cast<int>(std::floor((bounds_max.x() - bounds_min.x()) / dsx)) + 1;
  const int ny =
      static_cast<int>(std::floor((bounds_max.y() - bounds_min.y()) / dsy)) + 1;
  if (nx < 1 || ny < 1) throw ConfigError("empty grid");
  WorkpieceGrid grid(bounds_min, dsx, dsy, nx, ny);
  for (int iy = 0; iy < ny; ++iy) {
    const double y = grid.node_y(iy);
    for (int ix = 0; ix < nx; ++ix)
      if (material(grid.node_x(ix), y)) grid.set(ix, iy, true);
  }
  return grid;
}

WorkpieceGrid init_grid_rect(const Eigen::Vector2d& bounds_min,
                             const Eigen::Vector2d& bounds_max, double dsx,
                             double dsy, const Eigen::Vector2d& material_min,
                             const Eigen::Vector2d& material_max) {
  return init_grid(bounds_min, bounds_max, dsx, dsy,
                   [&](double x, double y) {
                     return x >= material_min.x() && x <= material_max.x() &&
                            y >= material_min.y() && y <= material_max.y();
                   });
}

double sweep_and_remove(WorkpieceGrid& grid, const ToothSweep& sweep) {
  if (sweep.R <= 0) throw ConfigError("tooth sweep needs a positive radius");

  // angular span at the current centre: from the direction of the previous
  // tip position to the current edge angle
  const Eigen::Vector2d prev_tip =
      sweep.tcp_prev + sweep.R * tooth_direction(sweep.phi_prev);
  const Eigen::Vector2d rel = prev_tip - sweep.tcp_now;
  const double start =
      wrap_angle(std::atan2(rel.x(), rel.y()));
  const double end = wrap_angle(sweep.phi_now);
  double span = end - start;
  if (span <= 0) span += 2.0 * M_PI;
  if (span >= M_PI)
    throw ConfigError("tooth sweep spans half a turn or more; reduce the step");

  const double R2 = sweep.R * sweep.R;
  const auto inside = [&](double x, double y) {
    const double vx = x - sweep.tcp_now.x();
    const double vy = y - sweep.tcp_now.y();
    if (vx * vx + vy * vy > R2) return false;
    double a = wrap_angle(std::atan2(vx, vy)) - start;
    if (a < 0) a += 2.0 * M_PI;
    return a <= span;
  };

  // bounding box of the swept sector: centre, the two arc endpoints and any
  // cardinal directions inside the span
  double min_x = sweep.tcp_now.x(), max_x = sweep.tcp_now.x();
  double min_y = sweep.tcp_now.y(), max_y = sweep.tcp_now.y();
  auto include = [&](const Eigen::Vector2d& pt) {
    min_x = std::min(min_x, pt.x());
    max_x = std::max(max_x, pt.x());
    min_y = std::min(min_y, pt.y());
    max_y = std::max(max_y, pt.y());
  };
  include(sweep.tcp_now + sweep.R * tooth_direction(start));
  include(sweep.tcp_now + sweep.R * tooth_direction(end));
  for (double cardinal = 0; cardinal < 2.0 * M_PI; cardinal += 0.5 * M_PI) {
    double a = cardinal - start;
    if (a < 0) a += 2.0 * M_PI;
    if (a <= span)
      include(sweep.tcp_now + sweep.R * tooth_direction(cardinal));
  }

  const int ix0 = static_cast<int>(
      std::floor((min_x - grid.origin().x()) / grid.dsx())) - 1;
  const int ix1 = static_cast<int>(
      std::ceil((max_x - grid.origin().x()) / grid.dsx())) + 1;
  const int iy0 = static_cast<int>(
      std::floor((min_y - grid.origin().y()) / grid.dsy())) - 1;
  const int iy1 = static_cast<int>(
      std::ceil((max_y - grid.origin().y()) / grid.dsy())) + 1;

  const std::int64_t flipped = grid.remove_if(ix0, ix1, iy0, iy1, inside);
  return static_cast<double>(flipped) * grid.cell_area();
}

double chip_thickness(double A, double R, double dphi) {
  if (R <= 0) throw ConfigError("chip thickness needs a positive radius");
  if (dphi <= 0) throw ConfigError("degenerate angular step in chip thickness");
  if (A == 0) return 0.0;
  return A / (R * dphi);
}

std::vector<ProfilePoint> machined_profile(const WorkpieceGrid& grid,
                                           double y_start, int direction) {
  if (grid.node_count() == 0) throw ConfigError("empty grid");
  if (direction != 1 && direction != -1)
    throw ConfigError("profile direction must be +1 or -1");

  int iy_start = static_cast<int>(
      std::lround((y_start - grid.origin().y()) / grid.dsy()));
  iy_start = std::clamp(iy_start, 0, grid.ny() - 1);

  std::vector<ProfilePoint> profile;
  profile.reserve(grid.nx());
  for (int ix = 0; ix < grid.nx(); ++ix) {
    const bool start_state = grid.occupied(ix, iy_start);
    for (int iy = iy_start;
         direction > 0 ? iy < grid.ny() - 1 : iy > 0; iy += direction) {
      if (grid.occupied(ix, iy + direction) != start_state) {
        // transition edge halfway between the two nodes
        profile.push_back(
            {grid.node_x(ix),
             0.5 * (grid.node_y(iy) + grid.node_y(iy + direction))});
        break;
      }
    }
  }
  return profile;
}

}  // namespace rmill
