#pragma once

// Local-likelihood transformation kernel density estimation for positive
// random variables: estimators, smoothing selection, asymptotic-formula
// evaluators and the Monte Carlo benchmark harness.

#include "lltkde/asymptotics.hpp"
#include "lltkde/bandwidth.hpp"
#include "lltkde/bench.hpp"
#include "lltkde/competitors.hpp"
#include "lltkde/genf.hpp"
#include "lltkde/kernels.hpp"
#include "lltkde/loclik.hpp"
#include "lltkde/lscv.hpp"
#include "lltkde/quadrature.hpp"
#include "lltkde/special.hpp"
#include "lltkde/tkde.hpp"
#include "lltkde/transforms.hpp"
#include "lltkde/version.hpp"
