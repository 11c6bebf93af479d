#pragma once

#include <vector>

#include "tsw/measure.hpp"
#include "tsw/splitting.hpp"
#include "tsw/tree_system.hpp"

namespace tsw {

// One projected atom on a line: parameter, carried mass, and the index of
// the source atom in the input measure.
struct ProjectedAtom {
  double coord;
  double mass;
  int origin;
};

// Image of a discrete measure under the Radon transform on a tree system:
// per line, atoms sorted ascending by coord (ties by origin index).
struct ProjectedMeasure {
  std::vector<std::vector<ProjectedAtom>> lines;

  int line_count() const { return static_cast<int>(lines.size()); }
  double total_mass() const;
};

// Pushes `measure` onto the k lines of `ts`: for atom (a_i, u_i) and line l,
// coord = <a_i - x_l, theta_l> and mass = alpha(a_i)_l * u_i. Atoms with
// mass below 1e-300 are dropped.
ProjectedMeasure project(const DiscreteMeasure& measure, const TreeSystem& ts,
                         const SplittingMap& alpha);

}  // namespace tsw
