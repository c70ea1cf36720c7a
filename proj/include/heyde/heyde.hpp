#pragma once

#include "heyde/errors.hpp"
#include "heyde/group.hpp"
#include "heyde/rational.hpp"
#include "heyde/random.hpp"
#include "heyde/distribution.hpp"
#include "heyde/predicates.hpp"
#include "heyde/funceq.hpp"
#include "heyde/search.hpp"
#include "heyde/json_io.hpp"
#include "heyde/verify.hpp"
