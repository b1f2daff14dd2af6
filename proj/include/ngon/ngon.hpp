#pragma once

#include "ngon/geometry.hpp"
#include "ngon/representation.hpp"
#include "ngon/spectral.hpp"
#include "ngon/hessian.hpp"
#include "ngon/degeneracy.hpp"
