// Umbrella header.
#pragma once

#include "elltwist/afe.hpp"
#include "elltwist/arith.hpp"
#include "elltwist/artin.hpp"
#include "elltwist/characters.hpp"
#include "elltwist/common.hpp"
#include "elltwist/config.hpp"
#include "elltwist/elliptic.hpp"
#include "elltwist/experiment.hpp"
#include "elltwist/fft.hpp"
#include "elltwist/lfunction.hpp"
#include "elltwist/numerics.hpp"
#include "elltwist/ramification.hpp"
