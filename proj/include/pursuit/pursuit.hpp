#pragma once

#include "dynamics.hpp"
#include "episode.hpp"
#include "errors.hpp"
#include "format.hpp"
#include "golden.hpp"
#include "manifest.hpp"
#include "mlp.hpp"
#include "observation.hpp"
#include "strategies.hpp"
#include "svg.hpp"
#include "vec2.hpp"
#include "zone.hpp"
