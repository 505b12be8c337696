#pragma once

#include "errors.hpp"
#include "estimation.hpp"
#include "kernel.hpp"
#include "matrix.hpp"
#include "model.hpp"
#include "nh_kernel.hpp"
#include "periodicity.hpp"
#include "random.hpp"
#include "sequence.hpp"
#include "simulate.hpp"
#include "state_space.hpp"
