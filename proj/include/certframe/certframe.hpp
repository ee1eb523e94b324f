#pragma once

#include "certframe/core/dyadic.hpp"
#include "certframe/core/numbers.hpp"
#include "certframe/core/real_name.hpp"
#include "certframe/hilbert/finite_vector.hpp"
#include "certframe/hilbert/ops.hpp"
#include "certframe/hilbert/vector_name.hpp"
#include "certframe/operators/operator_name.hpp"
#include "certframe/frames/frame.hpp"
#include "certframe/frames/representation.hpp"
#include "certframe/duality/duality.hpp"
#include "certframe/riesz/riesz.hpp"
#include "certframe/gallery/gallery.hpp"
#include "certframe/oracle/exact_frame.hpp"
