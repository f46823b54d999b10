#pragma once

#include "bounds.hpp"
#include "coefficients.hpp"
#include "convexity.hpp"
#include "core.hpp"
#include "means.hpp"
#include "quadrature.hpp"
