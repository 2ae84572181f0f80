#pragma once

#include "ratingmc/assumption_tests.hpp"
#include "ratingmc/core_model.hpp"
#include "ratingmc/date.hpp"
#include "ratingmc/descriptive_stats.hpp"
#include "ratingmc/estimation.hpp"
#include "ratingmc/expm.hpp"
#include "ratingmc/ingest.hpp"
#include "ratingmc/simulator.hpp"
