#pragma once

// Umbrella header.

#include "twistlab/common.hpp"
#include "twistlab/nfunction.hpp"
#include "twistlab/spaces.hpp"
#include "twistlab/linalg.hpp"
#include "twistlab/geometry.hpp"
#include "twistlab/interpolator.hpp"
#include "twistlab/derivations.hpp"
#include "twistlab/models.hpp"
#include "twistlab/commutators.hpp"
#include "twistlab/singularity.hpp"
#include "twistlab/json_io.hpp"
#include "twistlab/experiments.hpp"
