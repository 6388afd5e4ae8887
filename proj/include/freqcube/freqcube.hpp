#pragma once

#include "freqcube/bitrades.hpp"
#include "freqcube/core.hpp"
#include "freqcube/cubes.hpp"
#include "freqcube/errors.hpp"
#include "freqcube/io.hpp"
#include "freqcube/lincodes.hpp"
#include "freqcube/pascal.hpp"
#include "freqcube/reports.hpp"
#include "freqcube/testsets.hpp"
