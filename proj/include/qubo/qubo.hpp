// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qubo/analysis.hpp"
#include "qubo/anneal.hpp"
#include "qubo/enumerate.hpp"
#include "qubo/errors.hpp"
#include "qubo/generators.hpp"
#include "qubo/io.hpp"
#include "qubo/model.hpp"
#include "qubo/rng.hpp"
#include "qubo/twosat.hpp"
