#pragma once

#include "edapx/bench.hpp"
#include "edapx/bitstring.hpp"
#include "edapx/bourgain.hpp"
#include "edapx/config.hpp"
#include "edapx/driver.hpp"
#include "edapx/edit_distance.hpp"
#include "edapx/gap.hpp"
#include "edapx/graph.hpp"
#include "edapx/grid_sketch.hpp"
#include "edapx/ideal.hpp"
#include "edapx/length_set.hpp"
#include "edapx/levels.hpp"
#include "edapx/pattern_match.hpp"
#include "edapx/product_metrics.hpp"
#include "edapx/quantize.hpp"
#include "edapx/rational.hpp"
#include "edapx/reduce.hpp"
#include "edapx/star_forest.hpp"
#include "edapx/temd.hpp"
