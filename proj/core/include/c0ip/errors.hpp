#pragma once

#include <stdexcept>
#include <string>

namespace c0ip {

// Degenerate input geometry: zero-area triangles, fully collinear point
// clouds, empty meshes, patches that cannot be grown any further.
class GeometryError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Broken mesh connectivity, e.g. an edge shared by more than two triangles.
class TopologyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A matrix handed to the SPD solver turned out not to be positive definite.
// Carries the index of the offending pivot when it is known.
class DefinitenessError : public std::runtime_error {
public:
  DefinitenessError(const std::string& what, long pivot)
      : std::runtime_error(what), pivot_index(pivot) {}
  long pivot_index = -1;
};

// A recovery patch could not reach enough well-conditioned samples.
class PatchError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Point evaluation failed (point outside the mesh, derivative requested at a
// singular point of an exact solution, ...).
class EvaluationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Effectivity index requested against a zero reference error.
class EffectivityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace c0ip
