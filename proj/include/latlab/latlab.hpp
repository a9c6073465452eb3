#pragma once

#include "latlab/classical_r.hpp"
#include "latlab/closed_forms.hpp"
#include "latlab/driver.hpp"
#include "latlab/elliptic_poly.hpp"
#include "latlab/lattice.hpp"
#include "latlab/numeric.hpp"
#include "latlab/rmatrix.hpp"
#include "latlab/sampling.hpp"
#include "latlab/tensor2.hpp"
#include "latlab/theta.hpp"
