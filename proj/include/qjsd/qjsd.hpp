#pragma once

#include "qjsd/anneal.hpp"
#include "qjsd/audit.hpp"
#include "qjsd/divergences.hpp"
#include "qjsd/error.hpp"
#include "qjsd/linalg.hpp"
#include "qjsd/probability.hpp"
#include "qjsd/pure_states.hpp"
#include "qjsd/purification_metric.hpp"
#include "qjsd/rng.hpp"
#include "qjsd/state_io.hpp"
#include "qjsd/states.hpp"
