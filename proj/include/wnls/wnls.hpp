#pragma once

// Umbrella header for the numerical core.

#include "wnls/arcs.hpp"
#include "wnls/counting.hpp"
#include "wnls/cutoff.hpp"
#include "wnls/divisors.hpp"
#include "wnls/duhamel.hpp"
#include "wnls/fft.hpp"
#include "wnls/field.hpp"
#include "wnls/fit.hpp"
#include "wnls/flow.hpp"
#include "wnls/matrix_cs.hpp"
#include "wnls/norms.hpp"
#include "wnls/parallel.hpp"
#include "wnls/randomfield.hpp"
#include "wnls/rng.hpp"
#include "wnls/spacetime.hpp"
#include "wnls/torus.hpp"
#include "wnls/wick.hpp"
