#pragma once

#include "lcea/bit_vector.hpp"
#include "lcea/config_io.hpp"
#include "lcea/constraints.hpp"
#include "lcea/csv.hpp"
#include "lcea/engine.hpp"
#include "lcea/estimators.hpp"
#include "lcea/experiment.hpp"
#include "lcea/experiment_config.hpp"
#include "lcea/fitness.hpp"
#include "lcea/potentials.hpp"
#include "lcea/quantiles.hpp"
#include "lcea/random.hpp"
#include "lcea/result_store.hpp"
#include "lcea/studies.hpp"
