#pragma once

#include "solitons/errors.hpp"
#include "solitons/elliptic.hpp"
#include "solitons/duffing.hpp"
#include "solitons/waves.hpp"
#include "solitons/families.hpp"
#include "solitons/grid.hpp"
#include "solitons/residual.hpp"
#include "solitons/transforms.hpp"
#include "solitons/catalog.hpp"
#include "solitons/sim.hpp"
#include "solitons/io.hpp"
#include "solitons/experiments.hpp"
