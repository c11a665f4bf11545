#ifndef TENSORDIAG_TENSORDIAG_HPP
#define TENSORDIAG_TENSORDIAG_HPP

#include "tensordiag/basis_change.hpp"
#include "tensordiag/bench.hpp"
#include "tensordiag/common.hpp"
#include "tensordiag/complete.hpp"
#include "tensordiag/conditioning.hpp"
#include "tensordiag/forward_error.hpp"
#include "tensordiag/io.hpp"
#include "tensordiag/linalg.hpp"
#include "tensordiag/op_count.hpp"
#include "tensordiag/random.hpp"
#include "tensordiag/sub_recovery.hpp"
#include "tensordiag/sym_tensor.hpp"
#include "tensordiag/undercomplete.hpp"

#endif  // TENSORDIAG_TENSORDIAG_HPP
