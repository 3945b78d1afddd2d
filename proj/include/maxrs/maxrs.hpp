#pragma once

#include "cell_sampling.hpp"
#include "colored_approx.hpp"
#include "colored_exact.hpp"
#include "convolution.hpp"
#include "disk_union.hpp"
#include "geom_core.hpp"
#include "instance_io.hpp"
#include "maxrs_colored_sample.hpp"
#include "maxrs_dynamic.hpp"
#include "oracles.hpp"
#include "spatial_index.hpp"
