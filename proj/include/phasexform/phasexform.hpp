#pragma once

#include "chirpz.hpp"
#include "closedform.hpp"
#include "grid.hpp"
#include "hermite.hpp"
#include "io.hpp"
#include "quantum.hpp"
#include "xform.hpp"
