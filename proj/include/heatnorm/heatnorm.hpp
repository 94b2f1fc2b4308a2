#pragma once

#include "heatnorm/specfun.hpp"
#include "heatnorm/quadrature.hpp"
#include "heatnorm/sharp_constant.hpp"
#include "heatnorm/general_bound.hpp"
#include "heatnorm/extremizer.hpp"
#include "heatnorm/grid.hpp"
#include "heatnorm/bg_check.hpp"
