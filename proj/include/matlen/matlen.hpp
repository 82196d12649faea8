#pragma once

#include "matlen/bounds.hpp"
#include "matlen/certificates.hpp"
#include "matlen/error.hpp"
#include "matlen/field.hpp"
#include "matlen/harness.hpp"
#include "matlen/instances.hpp"
#include "matlen/io.hpp"
#include "matlen/length.hpp"
#include "matlen/matrix.hpp"
#include "matlen/polynomial.hpp"
#include "matlen/random.hpp"
#include "matlen/span_basis.hpp"
#include "matlen/spectral.hpp"
