#pragma once

#include "gcfibers/blocks.hpp"
#include "gcfibers/errors.hpp"
#include "gcfibers/flag_core.hpp"
#include "gcfibers/io.hpp"
#include "gcfibers/ladder.hpp"
#include "gcfibers/polytope.hpp"
#include "gcfibers/render.hpp"
#include "gcfibers/scalar.hpp"
#include "gcfibers/spectral.hpp"
