#pragma once

// Magnitude of finite metric spaces, l1 and Holmes-Thompson intrinsic volumes
// of convex bodies in hypermetric normed spaces, and the bound-verification
// pipelines built on them.

#include "magvol/bounds.hpp"
#include "magvol/cli.hpp"
#include "magvol/convex_bodies.hpp"
#include "magvol/errors.hpp"
#include "magvol/finite_metric.hpp"
#include "magvol/generating_measures.hpp"
#include "magvol/intrinsic_volumes.hpp"
#include "magvol/reports.hpp"
