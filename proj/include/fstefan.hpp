#pragma once

#include "fstefan/error.hpp"
#include "fstefan/specfun.hpp"
#include "fstefan/analytic.hpp"
#include "fstefan/fracquad.hpp"
#include "fstefan/tridiag.hpp"
#include "fstefan/scheme.hpp"
#include "fstefan/fronttrack.hpp"
#include "fstefan/config.hpp"
#include "fstefan/report.hpp"
