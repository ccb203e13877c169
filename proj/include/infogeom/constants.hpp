#pragma once
// Physical constants in caller-chosen units. Defaults are natural units
// (hbar = c = m = k = 1); SI values can be supplied where needed.

#include "infogeom/errors.hpp"

namespace infogeom {

struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;
  double k_boltz = 1.0;
  double c = 1.0;

  void validate() const {
    if (!(hbar > 0.0) || !(mass > 0.0) || !(k_boltz > 0.0) || !(c > 0.0))
      throw Error("physical constants must all be positive");
  }
};

}  // namespace infogeom
