#include "abfdns/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "abfdns/grid.hpp"

namespace abfdns {

namespace {

constexpr char kMagic[8] = {'A', 'B', 'F', 'D', 'N', 'S', '0', '1'};
constexpr std::size_t kHeaderBytes = 8 + 4 + 4 + 3 * 8 + 8 + 4;

void put_u32(std::vector<unsigned char>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::vector<unsigned char>& b, double d) {
  const std::uint64_t v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

/// Pack one component into exactly n1*n2*n3 doubles. Interior x1 planes are
/// stored as re/im pairs with xi1 fastest; the two Hermitian boundary planes
/// (i1 = 0 and n1/2) store one real for each self-conjugate mode and re/im
/// for the lexicographically-first member of every conjugate pair. Assumes
/// the field is canonical-Hermitian (every forward transform enforces this).
void pack_component(const GridSpec& g, const Complex* c, std::vector<unsigned char>& out) {
  const int nk1 = g.nk1();
  const int n2 = g.n2();
  const int n3 = g.n3();
  for (int p : {0, nk1 - 1}) {
    for (int i3 = 0; i3 < n3; ++i3) {
      const int i3p = (n3 - i3) % n3;
      for (int i2 = 0; i2 < n2; ++i2) {
        const int i2p = (n2 - i2) % n2;
        const Complex z = c[g.spec_index(p, i2, i3)];
        if (i3 == i3p && i2 == i2p) {
          put_f64(out, z.real());
        } else if (i3 < i3p || (i3 == i3p && i2 < i2p)) {
          put_f64(out, z.real());
          put_f64(out, z.imag());
        }
      }
    }
  }
  for (int i3 = 0; i3 < n3; ++i3) {
    for (int i2 = 0; i2 < n2; ++i2) {
      for (int i1 = 1; i1 < nk1 - 1; ++i1) {
        const Complex z = c[g.spec_index(i1, i2, i3)];
        put_f64(out, z.real());
        put_f64(out, z.imag());
      }
    }
  }
}

void unpack_component(const GridSpec& g, const unsigned char* in, Complex* c) {
  const int nk1 = g.nk1();
  const int n2 = g.n2();
  const int n3 = g.n3();
  std::size_t pos = 0;
  auto next = [&]() {
    const double d = get_f64(in + pos);
    pos += 8;
    return d;
  };
  for (int p : {0, nk1 - 1}) {
    for (int i3 = 0; i3 < n3; ++i3) {
      const int i3p = (n3 - i3) % n3;
      for (int i2 = 0; i2 < n2; ++i2) {
        const int i2p = (n2 - i2) % n2;
        if (i3 == i3p && i2 == i2p) {
          c[g.spec_index(p, i2, i3)] = Complex(next(), 0.0);
        } else if (i3 < i3p || (i3 == i3p && i2 < i2p)) {
          const double re = next();
          const double im = next();
          c[g.spec_index(p, i2, i3)] = Complex(re, im);
          c[g.spec_index(p, i2p, i3p)] = Complex(re, -im);
        }
      }
    }
  }
  for (int i3 = 0; i3 < n3; ++i3) {
    for (int i2 = 0; i2 < n2; ++i2) {
      for (int i1 = 1; i1 < nk1 - 1; ++i1) {
        const double re = next();
        const double im = next();
        c[g.spec_index(i1, i2, i3)] = Complex(re, im);
      }
    }
  }
}

}  // namespace

void write_snapshot(const std::string& path, const SpectralVelocityField& u, double t) {
  const GridSpec& g = *u.grid();
  std::vector<unsigned char> buf;
  buf.reserve(kHeaderBytes + 3 * g.phys_size() * 8);
  buf.insert(buf.end(), kMagic, kMagic + 8);
  put_u32(buf, static_cast<std::uint32_t>(g.n1()));
  put_u32(buf, static_cast<std::uint32_t>(g.n3()));
  for (int a = 1; a <= 3; ++a) put_f64(buf, g.length(a));
  put_f64(buf, t);
  put_u32(buf, 3);
  for (int c = 0; c < 3; ++c) pack_component(g, u.component(c), buf);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_snapshot: cannot open " + path);
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("write_snapshot: write failed for " + path);
}

LoadedSnapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);
  const std::streamsize actual = in.tellg();
  in.seekg(0);
  if (actual < static_cast<std::streamsize>(kHeaderBytes)) {
    throw std::runtime_error("read_snapshot: " + path + " truncated: expected at least " +
                             std::to_string(kHeaderBytes) + " header bytes, got " +
                             std::to_string(actual));
  }
  std::vector<unsigned char> buf(static_cast<std::size_t>(actual));
  in.read(reinterpret_cast<char*>(buf.data()), actual);
  if (!in) throw std::runtime_error("read_snapshot: read failed for " + path);

  if (std::memcmp(buf.data(), kMagic, 8) != 0) {
    throw std::runtime_error("read_snapshot: " + path + " has a corrupt header (bad magic)");
  }
  const std::uint32_t n_h = get_u32(buf.data() + 8);
  const std::uint32_t n_v = get_u32(buf.data() + 12);
  std::array<double, 3> box{};
  for (int a = 0; a < 3; ++a) box[a] = get_f64(buf.data() + 16 + 8 * a);
  const double t = get_f64(buf.data() + 40);
  const std::uint32_t comps = get_u32(buf.data() + 48);
  if (comps != 3) {
    throw std::runtime_error("read_snapshot: expected 3 components, got " +
                             std::to_string(comps));
  }

  const std::size_t expected =
      kHeaderBytes + static_cast<std::size_t>(comps) * n_h * n_h * n_v * 8;
  if (static_cast<std::size_t>(actual) != expected) {
    throw std::runtime_error("read_snapshot: " + path + " truncated: expected " +
                             std::to_string(expected) + " bytes, got " +
                             std::to_string(actual));
  }

  auto grid = make_grid(static_cast<int>(n_h), static_cast<int>(n_v), box);
  LoadedSnapshot snap{SpectralVelocityField(grid), t};
  const std::size_t comp_bytes = static_cast<std::size_t>(n_h) * n_h * n_v * 8;
  for (int c = 0; c < 3; ++c) {
    unpack_component(*grid, buf.data() + kHeaderBytes + c * comp_bytes,
                     snap.u.component(c));
  }
  snap.u.set_projected(true);
  return snap;
}

}  // namespace abfdns
