#pragma once

#include "rmill/types.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace rmill {

/// Rectangular occupancy grid over the workpiece plane. Nodes hold "1"
/// while material is present and flip to "0" when removed; they never
/// flip back. Storage is one bit per node, rows contiguous along x.
class WorkpieceGrid {
 public:
  WorkpieceGrid() = default;
  WorkpieceGrid(const Eigen::Vector2d& origin, double dsx, double dsy, int nx,
                int ny);

  double dsx() const { return dsx_; }
  double dsy() const { return dsy_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  const Eigen::Vector2d& origin() const { return origin_; }
  std::int64_t node_count() const {
    return static_cast<std::int64_t>(nx_) * ny_;
  }
  std::int64_t occupied_count() const { return occupied_; }
  double cell_area() const { return dsx_ * dsy_; }

  double node_x(int ix) const { return origin_.x() + ix * dsx_; }
  double node_y(int iy) const { return origin_.y() + iy * dsy_; }

  bool occupied(int ix, int iy) const {
    const std::int64_t bit = bit_index(ix, iy);
    return (words_[bit >> 6] >> (bit & 63)) & 1u;
  }

  void set(int ix, int iy, bool value);

  /// Removes every occupied node for which `inside` holds, restricted to
  /// the index rectangle [ix0, ix1] x [iy0, iy1]. Scans occupancy words so
  /// already-removed spans cost one instruction per 64 nodes. Returns the
  /// number of nodes flipped.
  std::int64_t remove_if(int ix0, int ix1, int iy0, int iy1,
                         const std::function<bool(double, double)>& inside);

  std::int64_t stride_words() const { return words_per_row_; }

 private:
  std::int64_t bit_index(int ix, int iy) const {
    return static_cast<std::int64_t>(iy) * (words_per_row_ * 64) + ix;
  }

  Eigen::Vector2d origin_ = Eigen::Vector2d::Zero();
  double dsx_ = 0, dsy_ = 0;
  int nx_ = 0, ny_ = 0;
  std::int64_t words_per_row_ = 0;
  std::int64_t occupied_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Swept region of one tooth between two simulation instants: the tool
/// centre moved tcp_prev -> tcp_now while the edge advanced from phi_prev
/// to phi_now.
struct ToothSweep {
  Eigen::Vector2d tcp_prev = Eigen::Vector2d::Zero();
  Eigen::Vector2d tcp_now = Eigen::Vector2d::Zero();
  double phi_prev = 0;
  double phi_now = 0;
  double R = 0;
};

/// Grid bounds and initial material region.
WorkpieceGrid init_grid(const Eigen::Vector2d& bounds_min,
                        const Eigen::Vector2d& bounds_max, double dsx,
                        double dsy,
                        const std::function<bool(double, double)>& material);

/// Rectangle convenience for init_grid.
WorkpieceGrid init_grid_rect(const Eigen::Vector2d& bounds_min,
                             const Eigen::Vector2d& bounds_max, double dsx,
                             double dsy, const Eigen::Vector2d& material_min,
                             const Eigen::Vector2d& material_max);

/// Removes the material covered by the tooth sweep and returns the removed
/// area A_i = (flipped node count) * dsx * dsy. The swept region is the
/// circular sector at tcp_now spanning from the previous tip direction to
/// phi_now, which covers the union of the rotation sector and the band
/// between the two tip arcs.
double sweep_and_remove(WorkpieceGrid& grid, const ToothSweep& sweep);

/// Chip thickness estimate h_i = A_i / (R * dphi); zero when A_i is zero.
double chip_thickness(double A, double R, double dphi);

struct ProfilePoint {
  double x;
  double y;
};

/// Surface boundary per x-column: starting from y_start and scanning in
/// `direction` (+1 toward +y), returns the first material/void transition
/// edge. Columns with no transition in range are omitted.
std::vector<ProfilePoint> machined_profile(const WorkpieceGrid& grid,
                                           double y_start, int direction = +1);

}  // namespace rmill
