#pragma once

#include "flexsim/config.hpp"
#include "flexsim/dynamics.hpp"
#include "flexsim/errors.hpp"
#include "flexsim/flexbeam.hpp"
#include "flexsim/harness.hpp"
#include "flexsim/linalg.hpp"
#include "flexsim/params.hpp"
#include "flexsim/profiles.hpp"
#include "flexsim/quadrature.hpp"
#include "flexsim/surface.hpp"
