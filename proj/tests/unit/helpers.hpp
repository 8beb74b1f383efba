#pragma once

#include <string>

#include "semigap/semigap.hpp"

namespace testing {

/// Setup from INI text, with catalog defaults for everything not given.
inline semigap::EstimatorSetup setup_from(const std::string& ini) {
  return semigap::build_setup(semigap::parse_config(ini));
}

}  // namespace testing
