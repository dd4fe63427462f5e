#pragma once

#include "isoflow/combinatorics.hpp"
#include "isoflow/error.hpp"
#include "isoflow/exact_rational.hpp"
#include "isoflow/flows.hpp"
#include "isoflow/integrator.hpp"
#include "isoflow/io.hpp"
#include "isoflow/morse.hpp"
#include "isoflow/oracles.hpp"
#include "isoflow/power_series.hpp"
#include "isoflow/rng.hpp"
#include "isoflow/tridiagonal.hpp"
#include "isoflow/verify.hpp"
