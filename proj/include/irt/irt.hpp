#pragma once

#include "errors.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"
#include "elements.hpp"
#include "problems.hpp"
#include "assembly.hpp"
#include "solver.hpp"
#include "analysis.hpp"
#include "verification.hpp"
#include "driver.hpp"
