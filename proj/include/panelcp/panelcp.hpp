#pragma once

// Umbrella header: change point testing for short panels via the ratio
// statistic, with Monte-Carlo asymptotic and bootstrap critical values.

#include "panelcp/asymptotic_test.hpp"
#include "panelcp/bootstrap.hpp"
#include "panelcp/change_point.hpp"
#include "panelcp/correlation.hpp"
#include "panelcp/covariance.hpp"
#include "panelcp/csv_io.hpp"
#include "panelcp/empirical.hpp"
#include "panelcp/errors.hpp"
#include "panelcp/mvn.hpp"
#include "panelcp/panel_data.hpp"
#include "panelcp/parallel.hpp"
#include "panelcp/report.hpp"
#include "panelcp/rng.hpp"
#include "panelcp/simulation.hpp"
#include "panelcp/statistic.hpp"
#include "panelcp/tables.hpp"
