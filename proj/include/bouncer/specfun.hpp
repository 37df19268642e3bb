#pragma once

#include "bouncer/airy.hpp"
#include "bouncer/quadrature.hpp"
