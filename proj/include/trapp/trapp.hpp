#pragma once

#include "trapp/bench.hpp"
#include "trapp/clustering.hpp"
#include "trapp/combinations.hpp"
#include "trapp/datagen.hpp"
#include "trapp/dijkstra.hpp"
#include "trapp/graph.hpp"
#include "trapp/io.hpp"
#include "trapp/overlay.hpp"
#include "trapp/partition.hpp"
#include "trapp/rng.hpp"
#include "trapp/shortcuts.hpp"
#include "trapp/types.hpp"
