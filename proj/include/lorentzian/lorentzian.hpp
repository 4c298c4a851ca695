// Umbrella header.
#pragma once

#include "area.hpp"
#include "christoffel.hpp"
#include "core.hpp"
#include "duality.hpp"
#include "field.hpp"
#include "hedgehog.hpp"
#include "kernel.hpp"
#include "measure.hpp"
#include "numeric.hpp"
#include "one_dim.hpp"
#include "polyhedral.hpp"
#include "serialize.hpp"
#include "support.hpp"
