#ifndef LBMEQ_CHECKPOINT_HPP_
#define LBMEQ_CHECKPOINT_HPP_

#include <filesystem>
#include <iosfwd>

#include "lbmeq/lattice.hpp"
#include "lbmeq/scheme.hpp"

namespace lbmeq {

// Binary checkpoint layout (little-endian host order):
//
//   char[8]   magic "LBMEQCK1"
//   uint32    d
//   uint32    extent of each axis (d values)
//   uint32    J
//   float64   dt
//   float64   lambda
//   int64     step count
//   float64   f, (J+1) values per node, nodes in row-major order
struct Checkpoint {
  SchemeState state;
  double dt = 0.0;
  double lambda = 0.0;
};

void write_checkpoint(std::ostream& out, const SchemeState& state, double dt, double lambda);
void write_checkpoint(const std::filesystem::path& path, const SchemeState& state, double dt,
                      double lambda);
Checkpoint read_checkpoint(std::istream& in);
Checkpoint read_checkpoint(const std::filesystem::path& path);

// CSV of the conserved fields: node coordinates, then rho and q components.
void write_moment_csv(std::ostream& out, const SchemeState& state, const MomentMatrix& mm);

} // namespace lbmeq

#endif // LBMEQ_CHECKPOINT_HPP_
