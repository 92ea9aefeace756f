#pragma once

#include "romeo/behaviors.hpp"
#include "romeo/domain.hpp"
#include "romeo/engines.hpp"
#include "romeo/metrics.hpp"
#include "romeo/random.hpp"
#include "romeo/report.hpp"
#include "romeo/run.hpp"
#include "romeo/scenario.hpp"
#include "romeo/scenario_text.hpp"
#include "romeo/simulation.hpp"
