#include "semigap/cloud.hpp"

#include <cmath>
#include <cstring>
#include <random>
#include <string>

#include "semigap/errors.hpp"

namespace semigap {

std::string_view to_string(CloudGenerator g) {
  switch (g) {
    case CloudGenerator::grid_in_box: return "grid-in-box";
    case CloudGenerator::ball: return "ball";
    case CloudGenerator::explicit_list: return "explicit-list";
  }
  return "unknown";
}

CloudGenerator parse_cloud_generator(std::string_view text) {
  if (text == "grid-in-box") return CloudGenerator::grid_in_box;
  if (text == "ball") return CloudGenerator::ball;
  if (text == "explicit-list") return CloudGenerator::explicit_list;
  throw ContractViolation("unknown cloud generator '" + std::string(text) +
                          "' (expected grid-in-box, ball or explicit-list)");
}

namespace {

constexpr std::size_t kMaxGridPoints = 1'000'000;

std::vector<State> make_grid(const CloudSpec& spec) {
  if (spec.count == 0) throw ContractViolation("grid-in-box needs count >= 1");
  if (!(spec.lower <= spec.upper)) throw ContractViolation("grid-in-box needs lower <= upper");
  double total = std::pow(static_cast<double>(spec.count), static_cast<double>(spec.dim));
  if (total > static_cast<double>(kMaxGridPoints)) {
    throw ContractViolation("grid-in-box with " + std::to_string(spec.count) + "^" +
                            std::to_string(spec.dim) + " points is too large; use a ball cloud");
  }
  std::vector<double> axis(spec.count);
  const double width = spec.upper - spec.lower;
  for (std::size_t i = 0; i < spec.count; ++i) {
    axis[i] = spec.count == 1 ? spec.lower
                              : spec.lower + width * static_cast<double>(i) /
                                                 static_cast<double>(spec.count - 1);
  }
  if (spec.count > 1) axis.back() = spec.upper;

  const auto n = static_cast<std::size_t>(total);
  std::vector<State> points;
  points.reserve(n);
  std::vector<std::size_t> digits(spec.dim, 0);
  for (std::size_t p = 0; p < n; ++p) {
    std::vector<double> coords(spec.dim);
    for (std::size_t d = 0; d < spec.dim; ++d) coords[d] = axis[digits[d]];
    points.emplace_back(std::move(coords));
    for (std::size_t d = spec.dim; d-- > 0;) {
      if (++digits[d] < spec.count) break;
      digits[d] = 0;
    }
  }
  return points;
}

std::vector<State> make_ball(const CloudSpec& spec) {
  if (!(spec.radius > 0.0)) throw ContractViolation("ball cloud needs radius > 0");
  NormSpec ball_norm = spec.ball_norm;
  ball_norm.dim = spec.dim;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<State> points;
  points.reserve(spec.count);
  while (points.size() < spec.count) {
    std::vector<double> coords(spec.dim);
    for (double& c : coords) c = gauss(rng);
    State direction(std::move(coords));
    const double length = norm(ball_norm, direction);
    if (!(length > 0.0)) continue;
    const double r = spec.radius * unit(rng);
    points.push_back((r / length) * direction);
  }
  return points;
}

}  // namespace

CompactCloud::CompactCloud(CloudSpec spec) : spec_(std::move(spec)) {
  if (spec_.dim == 0) throw ContractViolation("cloud dimension must be positive");
  switch (spec_.generator) {
    case CloudGenerator::grid_in_box: points_ = make_grid(spec_); break;
    case CloudGenerator::ball: points_ = make_ball(spec_); break;
    case CloudGenerator::explicit_list:
      for (const State& p : spec_.points) {
        if (p.dim() != spec_.dim) throw ContractViolation("explicit cloud point has wrong dimension");
        if (!p.all_finite()) throw ContractViolation("explicit cloud point is not finite");
      }
      points_ = spec_.points;
      break;
  }
}

CompactCloud CompactCloud::from_points(std::vector<State> points) {
  if (points.empty()) throw ContractViolation("explicit cloud needs at least one point");
  CloudSpec spec;
  spec.generator = CloudGenerator::explicit_list;
  spec.dim = points.front().dim();
  spec.count = points.size();
  spec.points = std::move(points);
  return CompactCloud(std::move(spec));
}

std::uint64_t CompactCloud::fingerprint() const noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const State& p : points_) {
    for (double x : p.coords()) {
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &x, sizeof(double));
      for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 0x100000001b3ULL;
      }
    }
  }
  return hash;
}

bool CompactCloud::satisfies_constraint() const {
  NormSpec ball_norm = spec_.ball_norm;
  ball_norm.dim = spec_.dim;
  for (const State& p : points_) {
    if (p.dim() != spec_.dim || !p.all_finite()) return false;
    switch (spec_.generator) {
      case CloudGenerator::grid_in_box:
        for (double x : p.coords()) {
          if (x < spec_.lower || x > spec_.upper) return false;
        }
        break;
      case CloudGenerator::ball:
        if (norm(ball_norm, p) > spec_.radius * (1.0 + 1e-12)) return false;
        break;
      case CloudGenerator::explicit_list: break;
    }
  }
  return true;
}

}  // namespace semigap
