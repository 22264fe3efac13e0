#pragma once

#include "semisimp/mesh.hpp"

#include <random>

namespace shapes {

using semisimp::Mesh;

Mesh tetrahedron();
Mesh icosahedron();
/// nx by ny vertices in the z = 0 plane, unit spacing; an open sheet.
Mesh grid(int nx, int ny);
/// Closed sphere with `cols` longitudes and rows - 1 latitude rings: 2 * cols * (rows - 1) faces.
Mesh uv_sphere(int cols, int rows, double radius = 1.0);
/// Closed torus with nu x nv vertices and a bumpy surface.
Mesh bumpy_torus(int nu, int nv);
/// Sphere-like body with a bulging head around +z; head vertices have z > head_z().
Mesh bunny_like(int cols, int rows);
inline double head_z() { return 0.55; }
/// Small jittered mesh with at most 50 faces: an open grid or a closed polyhedron.
Mesh random_small(std::mt19937_64& rng);

}  // namespace shapes
