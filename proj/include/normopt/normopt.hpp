#pragma once

// Umbrella header: norm synthesis for the simulated tax society by
// multi-objective evolution, front-quality indicators, and a voting reasoner
// that elects one norm set from the front.

#include "normopt/error.hpp"
#include "normopt/experiment.hpp"
#include "normopt/indicators.hpp"
#include "normopt/io.hpp"
#include "normopt/moea/config.hpp"
#include "normopt/moea/dominance.hpp"
#include "normopt/moea/evolve.hpp"
#include "normopt/moea/moeadd.hpp"
#include "normopt/moea/mombi2.hpp"
#include "normopt/moea/nsga2.hpp"
#include "normopt/moea/operators.hpp"
#include "normopt/moea/problem.hpp"
#include "normopt/moea/spea2.hpp"
#include "normopt/moea/weights.hpp"
#include "normopt/norms.hpp"
#include "normopt/reasoner.hpp"
#include "normopt/rng.hpp"
#include "normopt/society.hpp"
#include "normopt/values.hpp"
