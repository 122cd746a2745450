#ifndef CFDE_CFDE_HPP
#define CFDE_CFDE_HPP

#include "cfde/errors.hpp"
#include "cfde/expr.hpp"
#include "cfde/quadrature.hpp"
#include "cfde/calculus.hpp"
#include "cfde/trajectory.hpp"
#include "cfde/fde.hpp"
#include "cfde/structure.hpp"
#include "cfde/problem.hpp"
#include "cfde/verify.hpp"

#endif // CFDE_CFDE_HPP
