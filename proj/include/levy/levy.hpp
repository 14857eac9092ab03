#pragma once

#include "levy/field.hpp"
#include "levy/harmonic.hpp"
#include "levy/io.hpp"
#include "levy/kernel.hpp"
#include "levy/quadrature.hpp"
#include "levy/rng.hpp"
#include "levy/son.hpp"
#include "levy/stats.hpp"
#include "levy/su2.hpp"
#include "levy/version.hpp"
