#pragma once

#include "cascade/dynamics.hpp"
#include "cascade/equilibria.hpp"
#include "cascade/errors.hpp"
#include "cascade/export.hpp"
#include "cascade/matrix.hpp"
#include "cascade/model.hpp"
#include "cascade/numerics.hpp"
#include "cascade/scenario.hpp"
#include "cascade/sign_iteration.hpp"
