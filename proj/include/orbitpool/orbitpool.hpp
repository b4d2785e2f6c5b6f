#pragma once

// Umbrella header: the whole library.

#include "orbitpool/errors.hpp"
#include "orbitpool/experiment.hpp"
#include "orbitpool/geometry.hpp"
#include "orbitpool/group.hpp"
#include "orbitpool/image.hpp"
#include "orbitpool/parallel.hpp"
#include "orbitpool/pooling.hpp"
#include "orbitpool/region.hpp"
#include "orbitpool/report.hpp"
#include "orbitpool/rng.hpp"
#include "orbitpool/signature.hpp"
