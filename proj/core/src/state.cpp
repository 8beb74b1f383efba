#include "semigap/state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "semigap/errors.hpp"
#include "norm_kernel.hpp"

namespace semigap {

bool State::all_finite() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(), [](double x) { return std::isfinite(x); });
}

namespace {

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw ContractViolation("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

State operator-(const State& a, const State& b) {
  require_same_dim(a.dim(), b.dim());
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return State(std::move(out));
}

State operator+(const State& a, const State& b) {
  require_same_dim(a.dim(), b.dim());
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return State(std::move(out));
}

State operator*(double alpha, const State& a) {
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * a[i];
  return State(std::move(out));
}

std::string_view to_string(NormKind kind) {
  switch (kind) {
    case NormKind::sup: return "sup";
    case NormKind::euclidean: return "euclidean";
    case NormKind::l1: return "l1";
    case NormKind::weighted_l2: return "weighted-l2";
  }
  return "unknown";
}

NormKind parse_norm_kind(std::string_view text) {
  if (text == "sup") return NormKind::sup;
  if (text == "euclidean") return NormKind::euclidean;
  if (text == "l1") return NormKind::l1;
  if (text == "weighted-l2") return NormKind::weighted_l2;
  throw ContractViolation("unknown norm kind '" + std::string(text) +
                          "' (expected sup, euclidean, l1 or weighted-l2)");
}

double distance(const NormSpec& spec, std::span<const double> u, std::span<const double> v) {
  require_same_dim(u.size(), spec.dim);
  require_same_dim(v.size(), spec.dim);
  return detail::raw_distance(spec, u.data(), v.data(), u.size());
}

double distance(const NormSpec& spec, const State& u, const State& v) {
  return distance(spec, u.coords(), v.coords());
}

double norm(const NormSpec& spec, const State& u) {
  require_same_dim(u.dim(), spec.dim);
  const std::vector<double> zero(u.dim(), 0.0);
  return distance(spec, std::span<const double>(zero), u.coords());
}

}  // namespace semigap
