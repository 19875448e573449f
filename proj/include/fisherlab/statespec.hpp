#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "fisherlab/propagator.hpp"

namespace fisherlab {

// Initial-state descriptor, parsed from strings like
//   gaussian(delta=1)
//   hermite(k=3, delta=0.5)
//   superposition(0.6*gaussian(delta=1), (0.4,0.2)*hermite(k=2,delta=1))
//   file(/path/to/state.dat)
// Keys may be omitted in favor of positional values: hermite(3, 0.5).
struct StateSpec {
    enum class Kind { gaussian, hermite, superposition, file };
    Kind kind = Kind::gaussian;
    int k = 0;
    double delta = 1.0;
    std::vector<std::pair<complexd, StateSpec>> parts;  // superposition only
    std::string path;                                   // file only
};

StateSpec parse_state_spec(const std::string& text);

// Canonical one-line rendering (used in summaries and JSON meta).
std::string describe(const StateSpec& spec);

// Realize the spec as a sampled t=0 state on a bootstrap grid sized from the
// spec's own scales, with a closed-form evaluator attached for analytic kinds
// (including superpositions of analytic kinds). file() states carry no
// evaluator and are regridded spectrally downstream.
StateSource build_source(const StateSpec& spec);

}  // namespace fisherlab
