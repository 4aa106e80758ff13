#pragma once

#include "minkrad/minkrad.hpp"

namespace testing {

inline minkrad::RadialProblem desk(double lambda) {
  minkrad::RadialProblem p;
  p.dimension = 1;
  p.radius = 3.0;
  p.lambda = lambda;
  p.weight = minkrad::Weight(minkrad::PiecewiseConstantWeight{{1.0, 2.0}, {-1.0, 1.0, -1.0}});
  p.nonlinearity = minkrad::Nonlinearity(minkrad::PowerNonlinearity{2.0});
  return p;
}

inline minkrad::RadialProblem negative_constant(int N, double R, double lambda) {
  minkrad::RadialProblem p;
  p.dimension = N;
  p.radius = R;
  p.lambda = lambda;
  p.weight = minkrad::Weight::constant(-1.0);
  p.nonlinearity = minkrad::Nonlinearity(minkrad::PowerNonlinearity{2.0});
  return p;
}

}  // namespace testing
