#pragma once

// Umbrella header: the whole library.

#include "jsc/errors.hpp"
#include "jsc/linalg.hpp"
#include "jsc/lp.hpp"
#include "jsc/cones.hpp"
#include "jsc/enumerate.hpp"
#include "jsc/kron_lift.hpp"
#include "jsc/trace.hpp"
#include "jsc/subradius.hpp"
#include "jsc/perturbation.hpp"
#include "jsc/input.hpp"
#include "jsc/jobs.hpp"
#include "jsc/report_io.hpp"
#include "jsc/cli.hpp"
