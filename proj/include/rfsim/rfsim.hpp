#pragma once

#include "rfsim/diagnostics.hpp"
#include "rfsim/emitter.hpp"
#include "rfsim/error.hpp"
#include "rfsim/geometry.hpp"
#include "rfsim/imaging.hpp"
#include "rfsim/parallel.hpp"
#include "rfsim/quadrature.hpp"
#include "rfsim/receiver.hpp"
#include "rfsim/spectral.hpp"
#include "rfsim/wavefield.hpp"
