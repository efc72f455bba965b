// starnet.hpp — umbrella header

#pragma once

#include "starnet/dynamics.hpp"
#include "starnet/error.hpp"
#include "starnet/fock.hpp"
#include "starnet/linalg.hpp"
#include "starnet/model.hpp"
#include "starnet/modes.hpp"
#include "starnet/sweep.hpp"
#include "starnet/transform.hpp"
