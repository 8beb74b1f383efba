#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

namespace semigap {

/// Finite-dimensional element of the state space X.
class State {
 public:
  State() = default;
  explicit State(std::vector<double> coords) : coords_(std::move(coords)) {}
  State(std::initializer_list<double> coords) : coords_(coords) {}

  static State zeros(std::size_t dim) { return State(std::vector<double>(dim, 0.0)); }

  std::size_t dim() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }
  std::span<double> coords() noexcept { return coords_; }
  const std::vector<double>& vector() const noexcept { return coords_; }

  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }

  bool all_finite() const noexcept;

  friend bool operator==(const State&, const State&) = default;

 private:
  std::vector<double> coords_;
};

State operator-(const State& a, const State& b);
State operator+(const State& a, const State& b);
State operator*(double alpha, const State& a);

enum class NormKind { sup, euclidean, l1, weighted_l2 };

std::string_view to_string(NormKind kind);
NormKind parse_norm_kind(std::string_view text);

struct NormSpec {
  NormKind kind = NormKind::sup;
  double weight = 1.0;  // grid spacing; weighted_l2 only
  std::size_t dim = 1;

  friend bool operator==(const NormSpec&, const NormSpec&) = default;
};

/// Throws ContractViolation when u.dim() != spec.dim.
double norm(const NormSpec& spec, const State& u);

/// norm(v - u) without materializing the difference.
double distance(const NormSpec& spec, std::span<const double> u, std::span<const double> v);
double distance(const NormSpec& spec, const State& u, const State& v);

}  // namespace semigap
