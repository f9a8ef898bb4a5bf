#pragma once

#include "qch/core.hpp"
#include "qch/errors.hpp"
#include "qch/framework.hpp"
#include "qch/hilbert.hpp"
#include "qch/histories.hpp"
#include "qch/logic.hpp"
#include "qch/probability.hpp"
#include "qch/random.hpp"
#include "qch/report.hpp"
#include "qch/scenario_file.hpp"
#include "qch/scenarios.hpp"
