#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "semigap/state.hpp"

namespace semigap::detail {

/// norm(v - u) over raw coordinates; no dimension checks. Every distance in
/// the library goes through this so estimates and re-evaluations agree
/// bit-for-bit.
inline double raw_distance(const NormSpec& spec, const double* u, const double* v,
                           std::size_t dim) {
  switch (spec.kind) {
    case NormKind::sup: {
      double m = 0.0;
      for (std::size_t i = 0; i < dim; ++i) m = std::max(m, std::abs(v[i] - u[i]));
      return m;
    }
    case NormKind::l1: {
      double s = 0.0;
      for (std::size_t i = 0; i < dim; ++i) s += std::abs(v[i] - u[i]);
      return s;
    }
    case NormKind::euclidean:
    case NormKind::weighted_l2: {
      if (dim == 1) {
        const double w = spec.kind == NormKind::weighted_l2 ? spec.weight : 1.0;
        return std::sqrt(w) * std::abs(v[0] - u[0]);
      }
      double s = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        const double d = v[i] - u[i];
        s += d * d;
      }
      if (spec.kind == NormKind::weighted_l2) s *= spec.weight;
      return std::sqrt(s);
    }
  }
  return 0.0;
}

}  // namespace semigap::detail
