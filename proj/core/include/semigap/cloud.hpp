#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "semigap/state.hpp"

namespace semigap {

enum class CloudGenerator { grid_in_box, ball, explicit_list };

std::string_view to_string(CloudGenerator g);
CloudGenerator parse_cloud_generator(std::string_view text);

/// Recipe for a finite point cloud standing in for a compact set K.
///
/// grid_in_box: `count` points per axis spanning [lower, upper] on every
/// axis (count^dim points in total). ball: `count` seeded points in the
/// closed ball of radius `radius` in `ball_norm`; radii are drawn uniformly
/// in [0, radius] so pair distances span several scales. explicit_list:
/// `points` verbatim.
struct CloudSpec {
  CloudGenerator generator = CloudGenerator::grid_in_box;
  std::size_t dim = 1;
  double lower = -1.0;
  double upper = 1.0;
  std::size_t count = 10;
  double radius = 1.0;
  NormSpec ball_norm{};
  std::uint64_t seed = 42;
  std::vector<State> points;

  friend bool operator==(const CloudSpec&, const CloudSpec&) = default;
};

class CompactCloud {
 public:
  CompactCloud() = default;
  /// Generates the points; throws ContractViolation on a malformed spec.
  explicit CompactCloud(CloudSpec spec);

  static CompactCloud from_points(std::vector<State> points);

  const CloudSpec& spec() const noexcept { return spec_; }
  const std::vector<State>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::size_t dim() const noexcept { return spec_.dim; }

  /// 64-bit FNV-1a digest of the coordinates' bytes.
  std::uint64_t fingerprint() const noexcept;

  /// Every point finite and inside the generator's geometric constraint.
  bool satisfies_constraint() const;

 private:
  CloudSpec spec_;
  std::vector<State> points_;
};

}  // namespace semigap
