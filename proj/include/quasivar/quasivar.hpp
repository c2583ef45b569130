#pragma once

#include "quasivar/affine.hpp"
#include "quasivar/atype.hpp"
#include "quasivar/duality.hpp"
#include "quasivar/error.hpp"
#include "quasivar/evaluate.hpp"
#include "quasivar/gba.hpp"
#include "quasivar/homs.hpp"
#include "quasivar/io.hpp"
#include "quasivar/jobs.hpp"
#include "quasivar/morley.hpp"
#include "quasivar/parse.hpp"
#include "quasivar/products.hpp"
#include "quasivar/radical.hpp"
#include "quasivar/scoped.hpp"
#include "quasivar/structure.hpp"
#include "quasivar/syntax.hpp"
#include "quasivar/witness.hpp"
