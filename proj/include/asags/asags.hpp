#pragma once

#include "asags/alignment.hpp"
#include "asags/baselines.hpp"
#include "asags/config.hpp"
#include "asags/csv.hpp"
#include "asags/dataset.hpp"
#include "asags/error.hpp"
#include "asags/evaluation.hpp"
#include "asags/lexicon.hpp"
#include "asags/porter.hpp"
#include "asags/scoring.hpp"
#include "asags/text.hpp"
