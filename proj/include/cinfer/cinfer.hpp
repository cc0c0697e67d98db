#pragma once

#include "cinfer/basic_set.hpp"
#include "cinfer/catalog.hpp"
#include "cinfer/ci_structure.hpp"
#include "cinfer/distribution.hpp"
#include "cinfer/enumeration.hpp"
#include "cinfer/inequalities.hpp"
#include "cinfer/json_io.hpp"
#include "cinfer/paper_checks.hpp"
#include "cinfer/rational.hpp"
#include "cinfer/rules.hpp"
#include "cinfer/set_function.hpp"
