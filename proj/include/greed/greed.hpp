#pragma once

#include "greed/crossprod.hpp"
#include "greed/direction_model.hpp"
#include "greed/embedding.hpp"
#include "greed/evaluate.hpp"
#include "greed/gradcheck.hpp"
#include "greed/graph.hpp"
#include "greed/io_util.hpp"
#include "greed/matrix.hpp"
#include "greed/proximity.hpp"
#include "greed/rng.hpp"
