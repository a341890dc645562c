#ifndef KRECYCLE_KRECYCLE_HPP
#define KRECYCLE_KRECYCLE_HPP

#include "krecycle/errors.hpp"
#include "krecycle/timer.hpp"

#include "krecycle/linalg/dense.hpp"
#include "krecycle/linalg/eigen.hpp"
#include "krecycle/linalg/sparse_matrix.hpp"
#include "krecycle/linalg/vector_ops.hpp"

#include "krecycle/solver/apcg.hpp"
#include "krecycle/solver/deflation.hpp"
#include "krecycle/solver/preconditioner.hpp"

#include "krecycle/ritz/lanczos.hpp"
#include "krecycle/ritz/predictors.hpp"
#include "krecycle/ritz/selection.hpp"

#include "krecycle/problems/diffusion.hpp"
#include "krecycle/problems/matrix_market.hpp"
#include "krecycle/problems/rng.hpp"
#include "krecycle/problems/spectrum.hpp"

#include "krecycle/recycle/basis.hpp"
#include "krecycle/recycle/overlap.hpp"
#include "krecycle/recycle/sequence.hpp"
#include "krecycle/recycle/strategy.hpp"

#endif
