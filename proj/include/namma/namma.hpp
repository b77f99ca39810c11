#pragma once

#include "namma/specfun.hpp"
#include "namma/ode_core.hpp"
#include "namma/matching.hpp"
#include "namma/potential.hpp"
