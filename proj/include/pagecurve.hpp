#ifndef PAGECURVE_HPP
#define PAGECURVE_HPP

#include "pagecurve/analytic.hpp"
#include "pagecurve/errors.hpp"
#include "pagecurve/gaussian.hpp"
#include "pagecurve/haar.hpp"
#include "pagecurve/monte_carlo.hpp"
#include "pagecurve/permutation.hpp"
#include "pagecurve/polynomial.hpp"
#include "pagecurve/rational.hpp"
#include "pagecurve/weingarten.hpp"

#endif  // PAGECURVE_HPP
