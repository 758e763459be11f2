#pragma once

// Joint spectra of solvable Lie algebras of matrices: the character-twisted
// homology complex of E (x) Wedge L, exactness tests, and the theorem
// verification harness.

#include "liespec/errors.hpp"
#include "liespec/scalar.hpp"
#include "liespec/matrix.hpp"
#include "liespec/linalg.hpp"
#include "liespec/lie_structure.hpp"
#include "liespec/multi_index.hpp"
#include "liespec/homology.hpp"
#include "liespec/spectrum.hpp"
#include "liespec/theorem_harness.hpp"
#include "liespec/io.hpp"
