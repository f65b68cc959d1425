#pragma once

// Everything except the CLI front end.
#include "edwardsg2/divisor.hpp"
#include "edwardsg2/edwards.hpp"
#include "edwardsg2/family.hpp"
#include "edwardsg2/field.hpp"
#include "edwardsg2/io.hpp"
#include "edwardsg2/kummer.hpp"
#include "edwardsg2/surface.hpp"
