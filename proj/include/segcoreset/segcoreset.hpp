#pragma once

#include "segcoreset/types.hpp"
#include "segcoreset/random.hpp"
#include "segcoreset/geometry.hpp"
#include "segcoreset/loss_oracle.hpp"
#include "segcoreset/seg_coreset.hpp"
#include "segcoreset/grid_union.hpp"
#include "segcoreset/solver.hpp"
#include "segcoreset/point_coreset.hpp"
#include "segcoreset/pipeline.hpp"
#include "segcoreset/data_io.hpp"
#include "segcoreset/tracking.hpp"

namespace segcoreset {
inline constexpr const char* kVersion = "segcoreset 0.1.0";
}
