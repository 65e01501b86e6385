// afa.hpp - umbrella header
#pragma once

#include "afa/error.hpp"
#include "afa/fft.hpp"
#include "afa/grid.hpp"
#include "afa/kernels.hpp"
#include "afa/fields.hpp"
#include "afa/functional.hpp"
#include "afa/solver.hpp"
#include "afa/sweep.hpp"
#include "afa/geometry.hpp"
#include "afa/manybody.hpp"
#include "afa/random_states.hpp"
#include "afa/state_io.hpp"
#include "afa/verify.hpp"
#include "afa/version.hpp"
