#pragma once

#include "entbat/battery.hpp"
#include "entbat/dilution.hpp"
#include "entbat/errors.hpp"
#include "entbat/measures.hpp"
#include "entbat/qmat.hpp"
#include "entbat/rational.hpp"
#include "entbat/separable.hpp"
#include "entbat/state_io.hpp"
#include "entbat/states.hpp"
#include "entbat/thermo.hpp"
