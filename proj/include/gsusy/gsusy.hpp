#pragma once

#include "gsusy/error.hpp"
#include "gsusy/model.hpp"
#include "gsusy/specfun.hpp"
#include "gsusy/grid.hpp"
#include "gsusy/tridiagonal.hpp"
#include "gsusy/susy.hpp"
#include "gsusy/electric.hpp"
#include "gsusy/magnetic.hpp"
#include "gsusy/oracle.hpp"
