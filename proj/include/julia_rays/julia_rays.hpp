#pragma once

#include "julia_rays/brolin.hpp"
#include "julia_rays/circle.hpp"
#include "julia_rays/errors.hpp"
#include "julia_rays/exact.hpp"
#include "julia_rays/experiments.hpp"
#include "julia_rays/json_io.hpp"
#include "julia_rays/quadmap.hpp"
#include "julia_rays/raytrace.hpp"
#include "julia_rays/render.hpp"
#include "julia_rays/rotnum.hpp"
#include "julia_rays/wakes.hpp"
