#pragma once

#define LOOKDOWN_VERSION "0.1.0"

#include "lookdown/canonical.hpp"
#include "lookdown/coupling.hpp"
#include "lookdown/csv.hpp"
#include "lookdown/enumerate.hpp"
#include "lookdown/errors.hpp"
#include "lookdown/experiments.hpp"
#include "lookdown/genealogy.hpp"
#include "lookdown/gw.hpp"
#include "lookdown/model.hpp"
#include "lookdown/parallel.hpp"
#include "lookdown/partition.hpp"
#include "lookdown/random.hpp"
#include "lookdown/rational.hpp"
#include "lookdown/report.hpp"
#include "lookdown/samplers.hpp"
#include "lookdown/sbo.hpp"
#include "lookdown/stat_tests.hpp"
#include "lookdown/stats.hpp"
