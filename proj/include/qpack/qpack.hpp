#pragma once

#include "qpack/beam.hpp"
#include "qpack/design.hpp"
#include "qpack/enumerate.hpp"
#include "qpack/fixtures.hpp"
#include "qpack/fq.hpp"
#include "qpack/gaussian.hpp"
#include "qpack/group.hpp"
#include "qpack/incidence.hpp"
#include "qpack/io.hpp"
#include "qpack/orbit.hpp"
#include "qpack/subspace.hpp"
