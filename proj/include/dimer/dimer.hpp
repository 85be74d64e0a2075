#ifndef DIMER_DIMER_HPP
#define DIMER_DIMER_HPP

#include "dimer/criteria.hpp"
#include "dimer/errors.hpp"
#include "dimer/linearized.hpp"
#include "dimer/model.hpp"
#include "dimer/positivep.hpp"
#include "dimer/presets.hpp"
#include "dimer/spectra.hpp"
#include "dimer/types.hpp"

#endif
