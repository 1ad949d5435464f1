#ifndef RANDERS_RANDERS_HPP
#define RANDERS_RANDERS_HPP

#include "randers/error.hpp"
#include "randers/lie_core.hpp"
#include "randers/randers_metric.hpp"
#include "randers/killing.hpp"
#include "randers/constructor.hpp"

#endif  // RANDERS_RANDERS_HPP
