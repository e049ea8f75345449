#pragma once

#include "dpoi/colimits.hpp"
#include "dpoi/confluence.hpp"
#include "dpoi/convexity.hpp"
#include "dpoi/critical_pairs.hpp"
#include "dpoi/dot.hpp"
#include "dpoi/hypergraph.hpp"
#include "dpoi/independent_edge_sets.hpp"
#include "dpoi/isomorphism.hpp"
#include "dpoi/json_io.hpp"
#include "dpoi/rewriting.hpp"
