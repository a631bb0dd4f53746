#pragma once

#include "frx/core.hpp"
#include "frx/refelem.hpp"
#include "frx/alias.hpp"
#include "frx/gas.hpp"
#include "frx/field.hpp"
#include "frx/frcore.hpp"
#include "frx/march.hpp"
#include "frx/cases.hpp"
#include "frx/config.hpp"
#include "frx/runner.hpp"
