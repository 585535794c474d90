#pragma once

#include "gallai/apollonian.hpp"
#include "gallai/dot.hpp"
#include "gallai/generators.hpp"
#include "gallai/graph.hpp"
#include "gallai/io.hpp"
#include "gallai/oracle.hpp"
#include "gallai/sp_cover.hpp"
#include "gallai/spqtree.hpp"
