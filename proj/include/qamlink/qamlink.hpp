#ifndef QAMLINK_QAMLINK_HPP
#define QAMLINK_QAMLINK_HPP

#include "qamlink/channel.hpp"
#include "qamlink/commands.hpp"
#include "qamlink/config.hpp"
#include "qamlink/csv.hpp"
#include "qamlink/energy.hpp"
#include "qamlink/errors.hpp"
#include "qamlink/modulation.hpp"
#include "qamlink/network.hpp"
#include "qamlink/numerics.hpp"
#include "qamlink/sweep.hpp"

#endif
