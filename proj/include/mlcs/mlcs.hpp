#pragma once

#include "mlcs/bench.hpp"
#include "mlcs/beam_search.hpp"
#include "mlcs/classifier.hpp"
#include "mlcs/datagen.hpp"
#include "mlcs/heuristics.hpp"
#include "mlcs/hyper_heuristics.hpp"
#include "mlcs/probability.hpp"
#include "mlcs/random.hpp"
#include "mlcs/strings.hpp"
