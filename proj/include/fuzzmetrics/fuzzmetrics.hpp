#pragma once

#include "fuzzmetrics/config.hpp"
#include "fuzzmetrics/errors.hpp"
#include "fuzzmetrics/ext_real.hpp"
#include "fuzzmetrics/ground_space.hpp"
#include "fuzzmetrics/hausdorff.hpp"
#include "fuzzmetrics/fuzzy.hpp"
#include "fuzzmetrics/metrics.hpp"
#include "fuzzmetrics/diagnostics.hpp"
#include "fuzzmetrics/fixtures.hpp"
#include "fuzzmetrics/io.hpp"
