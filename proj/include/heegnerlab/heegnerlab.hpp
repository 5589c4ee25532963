#pragma once

#include "arith.hpp"
#include "quadforms.hpp"
#include "heegner.hpp"
#include "algebra.hpp"
#include "galois.hpp"
#include "glnmod.hpp"
#include "census.hpp"
#include "deuring.hpp"
#include "parallel.hpp"
#include "report.hpp"
