#pragma once

#include "pabo/bounce.hpp"
#include "pabo/dual_queue.hpp"
#include "pabo/engine.hpp"
#include "pabo/fib.hpp"
#include "pabo/frame.hpp"
#include "pabo/mac.hpp"
#include "pabo/metrics.hpp"
#include "pabo/report.hpp"
#include "pabo/rng.hpp"
#include "pabo/routing.hpp"
#include "pabo/scenario.hpp"
#include "pabo/sim.hpp"
#include "pabo/sweep.hpp"
#include "pabo/time.hpp"
#include "pabo/topology.hpp"
#include "pabo/traffic.hpp"
#include "pabo/transport.hpp"
