#pragma once

#include "scswalk/dynamics.hpp"
#include "scswalk/errors.hpp"
#include "scswalk/experiments.hpp"
#include "scswalk/hellinger_opt.hpp"
#include "scswalk/operators.hpp"
#include "scswalk/qmath.hpp"
#include "scswalk/spectral.hpp"
#include "scswalk/tolerances.hpp"
