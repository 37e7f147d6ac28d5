#pragma once

#include "peetre/step_function.hpp"
#include "peetre/symmetric_space.hpp"
#include "peetre/k_functional.hpp"
#include "peetre/sequence_space.hpp"
#include "peetre/peetre_space.hpp"
#include "peetre/inclusion.hpp"
#include "peetre/experiments.hpp"
#include "peetre/config.hpp"
#include "peetre/tables.hpp"
