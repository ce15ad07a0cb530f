#pragma once

#include "minorperc/bounds.hpp"
#include "minorperc/dense_minor.hpp"
#include "minorperc/dense_pipeline.hpp"
#include "minorperc/error.hpp"
#include "minorperc/exact_minor.hpp"
#include "minorperc/experiments.hpp"
#include "minorperc/generators.hpp"
#include "minorperc/graph.hpp"
#include "minorperc/graph_io.hpp"
#include "minorperc/minor.hpp"
#include "minorperc/percolation.hpp"
#include "minorperc/random.hpp"
#include "minorperc/sprinkling_minor.hpp"
#include "minorperc/tree_growth.hpp"
#include "minorperc/tree_tools.hpp"
