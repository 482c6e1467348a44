#include "lbmeq/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "lbmeq/error.hpp"

namespace lbmeq {

namespace {

constexpr char kMagic[8] = {'L', 'B', 'M', 'E', 'Q', 'C', 'K', '1'};

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in)
    throw ShapeError("truncated checkpoint");
  return value;
}

} // namespace

void write_checkpoint(std::ostream& out, const SchemeState& state, double dt, double lambda) {
  out.write(kMagic, sizeof(kMagic));
  const GridShape& shape = state.shape();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(shape.dim()));
  for (int a = 0; a < shape.dim(); ++a)
    put<std::uint32_t>(out, static_cast<std::uint32_t>(shape.extent(a)));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(state.q() - 1));
  put<double>(out, dt);
  put<double>(out, lambda);
  put<std::int64_t>(out, state.step_count());
  out.write(reinterpret_cast<const char*>(state.data().data()),
            static_cast<std::streamsize>(state.data().size() * sizeof(double)));
}

void write_checkpoint(const std::filesystem::path& path, const SchemeState& state, double dt,
                      double lambda) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot open " + path.string() + " for writing");
  write_checkpoint(out, state, dt, lambda);
}

Checkpoint read_checkpoint(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw ShapeError("not a checkpoint file");
  const auto dim = get<std::uint32_t>(in);
  if (dim < 1 || dim > static_cast<std::uint32_t>(kMaxDim))
    throw ShapeError("checkpoint has unsupported dimension");
  std::vector<int> extents;
  for (std::uint32_t a = 0; a < dim; ++a)
    extents.push_back(static_cast<int>(get<std::uint32_t>(in)));
  const int q = static_cast<int>(get<std::uint32_t>(in)) + 1;
  Checkpoint ck;
  ck.dt = get<double>(in);
  ck.lambda = get<double>(in);
  const auto steps = get<std::int64_t>(in);
  ck.state = SchemeState(GridShape(std::move(extents)), q);
  ck.state.set_step_count(static_cast<long>(steps));
  in.read(reinterpret_cast<char*>(ck.state.data().data()),
          static_cast<std::streamsize>(ck.state.data().size() * sizeof(double)));
  if (!in)
    throw ShapeError("truncated checkpoint");
  return ck;
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open " + path.string());
  return read_checkpoint(in);
}

void write_moment_csv(std::ostream& out, const SchemeState& state, const MomentMatrix& mm) {
  const GridShape& shape = state.shape();
  static const char* axis_names[] = {"x", "y"};
  static const char* q_names[] = {"qx", "qy"};
  for (int a = 0; a < shape.dim(); ++a)
    out << axis_names[a] << ',';
  out << "rho";
  for (int a = 0; a < mm.dim(); ++a)
    out << ',' << q_names[a];
  out << '\n';

  const auto fields = conserved_field(state, mm);
  const auto old_flags = out.flags();
  const auto old_precision = out.precision(17);
  for (std::size_t n = 0; n < state.node_count(); ++n) {
    const NodeIndex node = shape.multi(n);
    for (int a = 0; a < shape.dim(); ++a)
      out << node[a] << ',';
    out << fields[n].rho;
    for (int a = 0; a < mm.dim(); ++a)
      out << ',' << fields[n].q[a];
    out << '\n';
  }
  out.flags(old_flags);
  out.precision(old_precision);
}

} // namespace lbmeq
