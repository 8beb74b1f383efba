#pragma once

#include "semigap/analysis.hpp"
#include "semigap/cloud.hpp"
#include "semigap/config.hpp"
#include "semigap/errors.hpp"
#include "semigap/estimators.hpp"
#include "semigap/families.hpp"
#include "semigap/fit.hpp"
#include "semigap/model.hpp"
#include "semigap/problems.hpp"
#include "semigap/report.hpp"
#include "semigap/state.hpp"
#include "semigap/verdicts.hpp"
