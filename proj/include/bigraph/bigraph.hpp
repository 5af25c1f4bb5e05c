#pragma once

#include "numerics.hpp"
#include "weierstrass.hpp"
#include "sheet.hpp"
#include "correspondence.hpp"
#include "families.hpp"
#include "verify.hpp"
#include "io.hpp"
#include "mesh.hpp"
