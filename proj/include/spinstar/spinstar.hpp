#pragma once

// Umbrella header.

#include "spinstar/cloning.hpp"
#include "spinstar/errors.hpp"
#include "spinstar/evolution.hpp"
#include "spinstar/hilbert.hpp"
#include "spinstar/preparation.hpp"
#include "spinstar/version.hpp"
