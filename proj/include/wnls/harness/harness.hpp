#pragma once

#include "wnls/harness/config.hpp"
#include "wnls/harness/convergence_suite.hpp"
#include "wnls/harness/counting_suite.hpp"
#include "wnls/harness/probability_suite.hpp"
#include "wnls/harness/records.hpp"
#include "wnls/harness/scans.hpp"
#include "wnls/harness/verdict.hpp"
