#pragma once

#include "alphabet.hpp"
#include "combinatorics.hpp"
#include "emit.hpp"
#include "error.hpp"
#include "generate.hpp"
#include "infotheory.hpp"
#include "link_counts.hpp"
#include "numeric.hpp"
#include "parse.hpp"
#include "potential.hpp"
#include "rng.hpp"
#include "special_functions.hpp"
#include "spectrum.hpp"
#include "system.hpp"
#include "version.hpp"
