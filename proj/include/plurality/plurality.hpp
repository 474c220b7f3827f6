#pragma once

#include "plurality/approx_best.hpp"
#include "plurality/decision.hpp"
#include "plurality/dual.hpp"
#include "plurality/exact.hpp"
#include "plurality/geometry.hpp"
#include "plurality/io.hpp"
#include "plurality/median_point.hpp"
#include "plurality/oracles.hpp"
#include "plurality/planar_optimal.hpp"
