#pragma once

#include "minkrad/constants.hpp"
#include "minkrad/curvature.hpp"
#include "minkrad/error.hpp"
#include "minkrad/grid.hpp"
#include "minkrad/io.hpp"
#include "minkrad/operator.hpp"
#include "minkrad/problem.hpp"
#include "minkrad/quadrature.hpp"
#include "minkrad/shooting.hpp"
#include "minkrad/solver.hpp"
#include "minkrad/verify.hpp"
