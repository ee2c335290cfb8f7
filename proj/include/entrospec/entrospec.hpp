#pragma once

#include "entrospec/entropy.hpp"
#include "entrospec/equivalence.hpp"
#include "entrospec/error.hpp"
#include "entrospec/hermitian_eigen.hpp"
#include "entrospec/polynomial.hpp"
#include "entrospec/random.hpp"
#include "entrospec/recovery.hpp"
#include "entrospec/state.hpp"
#include "entrospec/types.hpp"
