#pragma once

#include <resent/concurrence.hpp>
#include <resent/so_generators.hpp>
#include <resent/sphere_ascent.hpp>
#include <resent/state_io.hpp>
#include <resent/tangle.hpp>
#include <resent/tensor_core.hpp>
#include <resent/types.hpp>
#include <resent/verify.hpp>
