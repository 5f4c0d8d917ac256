#pragma once

#include "atten/average.hpp"
#include "atten/checks.hpp"
#include "atten/config.hpp"
#include "atten/density.hpp"
#include "atten/error.hpp"
#include "atten/grid.hpp"
#include "atten/harness.hpp"
#include "atten/parallel.hpp"
#include "atten/posterior.hpp"
#include "atten/precision.hpp"
#include "atten/quadrature.hpp"
#include "atten/report.hpp"
#include "atten/svg.hpp"
