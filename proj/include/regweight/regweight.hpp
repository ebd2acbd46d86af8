#pragma once

#include "regweight/certifier.hpp"
#include "regweight/decompose.hpp"
#include "regweight/generators.hpp"
#include "regweight/graph.hpp"
#include "regweight/io_json.hpp"
#include "regweight/oracle.hpp"
#include "regweight/pipeline.hpp"
#include "regweight/pipeline_config.hpp"
#include "regweight/rational.hpp"
#include "regweight/solver_t2.hpp"
#include "regweight/weighting.hpp"
