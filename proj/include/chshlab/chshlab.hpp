#pragma once

#include "chshlab/analysis.hpp"
#include "chshlab/classical.hpp"
#include "chshlab/errors.hpp"
#include "chshlab/montecarlo.hpp"
#include "chshlab/outcomes.hpp"
#include "chshlab/quantum.hpp"
#include "chshlab/reports.hpp"
#include "chshlab/rng.hpp"
#include "chshlab/serialize.hpp"
#include "chshlab/simplex.hpp"
