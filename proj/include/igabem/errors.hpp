#ifndef IGABEM_ERRORS_HPP
#define IGABEM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace igabem {

// Parameter outside the curve domain, invalid knot data, etc.
using std::domain_error;

// Degenerate local geometry (vanishing Jacobian, cusp).
struct geometry_error : std::runtime_error {
  explicit geometry_error(const std::string& what) : std::runtime_error(what) {}
};

// Kernel evaluated at (numerically) coincident points.
struct singularity_error : std::runtime_error {
  explicit singularity_error(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite integrand or policy violation while building the system.
struct assembly_error : std::runtime_error {
  explicit assembly_error(const std::string& what) : std::runtime_error(what) {}
};

// Singular or numerically unusable linear system.
struct solver_error : std::runtime_error {
  explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

// Bad case configuration (harness level).
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Field evaluation requested too close to the surface for the regular rules.
struct near_surface_error : std::runtime_error {
  explicit near_surface_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace igabem

#endif
