#pragma once

#include "subent/combinatorics.hpp"
#include "subent/criterion.hpp"
#include "subent/experiments.hpp"
#include "subent/measures.hpp"
#include "subent/oracle.hpp"
#include "subent/parallel.hpp"
#include "subent/random.hpp"
#include "subent/seesaw.hpp"
#include "subent/state_io.hpp"
#include "subent/states.hpp"
#include "subent/tensor.hpp"
#include "subent/validation.hpp"
