#pragma once

#include "spinbus/basis.hpp"
#include "spinbus/effective.hpp"
#include "spinbus/errors.hpp"
#include "spinbus/measures.hpp"
#include "spinbus/model.hpp"
#include "spinbus/spectra.hpp"
#include "spinbus/state.hpp"
#include "spinbus/three_spin.hpp"
