#pragma once

#include <iosfwd>

namespace fisherlab {

// Runs the invariant battery (transform identities, estimator agreement,
// closed-form reproduction, evolution properties, emitter round trips) and
// prints one line per check. Returns true iff everything passed.
bool run_selfcheck(std::ostream& out);

}  // namespace fisherlab
