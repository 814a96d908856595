#include "hypersens/ensemble_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "hypersens/errors.hpp"

namespace hypersens {

namespace {

constexpr std::array<char, 4> kMagic = {'H', 'S', 'E', 'N'};

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void read_exact(std::istream& in, unsigned char* dst, std::size_t n, const char* what) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw FormatError(std::string("ensemble file: truncated while reading ") + what);
  }
}

std::uint32_t get_u32(std::istream& in, const char* what) {
  unsigned char b[4];
  read_exact(in, b, 4, what);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in, const char* what) {
  unsigned char b[8];
  read_exact(in, b, 8, what);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

void write_ensemble(std::ostream& out, const VectorEnsemble& ensemble) {
  if (!ensemble.params() || !ensemble.initial_state()) {
    throw InvalidParameter("ensemble file: only kicked-top ensembles can be persisted");
  }
  const auto& p = *ensemble.params();
  const auto& init = *ensemble.initial_state();
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kEnsembleFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(ensemble.dim()));
  put_u32(out, static_cast<std::uint32_t>(ensemble.size()));
  put_u32(out, static_cast<std::uint32_t>(p.steps));
  put_f64(out, p.spin.value());
  put_f64(out, p.k);
  put_f64(out, p.g);
  put_u32(out, static_cast<std::uint32_t>(init.kind));
  if (init.kind == InitialState::Kind::coherent) {
    put_f64(out, init.theta);
    put_f64(out, init.phi_az);
  } else {
    for (Index i = 0; i < init.amplitudes.size(); ++i) {
      put_f64(out, init.amplitudes[i].real());
      put_f64(out, init.amplitudes[i].imag());
    }
  }
  const ComplexMatrix& v = ensemble.vectors();
  for (Index j = 0; j < v.cols(); ++j) {
    for (Index i = 0; i < v.rows(); ++i) {
      put_f64(out, v(i, j).real());
      put_f64(out, v(i, j).imag());
    }
  }
  for (double q : ensemble.probabilities()) put_f64(out, q);
  if (!out) {
    throw Error("ensemble file: write failed");
  }
}

VectorEnsemble read_ensemble(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 4 || magic != kMagic) {
    throw FormatError("ensemble file: bad magic (expected HSEN)");
  }
  const std::uint32_t version = get_u32(in, "version");
  if (version != kEnsembleFormatVersion) {
    throw FormatError("ensemble file: format version " + std::to_string(version) +
                      " is not supported (this build reads version " +
                      std::to_string(kEnsembleFormatVersion) + ")");
  }
  const std::uint32_t d = get_u32(in, "D");
  const std::uint32_t n = get_u32(in, "N");
  const std::uint32_t steps = get_u32(in, "n");
  const double j = get_f64(in, "J");
  const double k = get_f64(in, "k");
  const double g = get_f64(in, "g");
  if (steps > 62 || (std::uint64_t{1} << steps) != n) {
    throw FormatError("ensemble file: N = " + std::to_string(n) + " is not 2^n for n = " +
                      std::to_string(steps));
  }

  TopParams params;
  try {
    params.spin = Spin::from_value(j);
  } catch (const InvalidParameter& e) {
    throw FormatError(std::string("ensemble file: ") + e.what());
  }
  if (params.spin.dim() != static_cast<Index>(d)) {
    throw FormatError("ensemble file: D does not equal 2J+1");
  }
  params.k = k;
  params.g = g;
  params.steps = static_cast<int>(steps);

  InitialState init;
  const std::uint32_t kind = get_u32(in, "initial-state kind");
  if (kind == static_cast<std::uint32_t>(InitialState::Kind::coherent)) {
    const double theta = get_f64(in, "theta");
    const double phi = get_f64(in, "phi_az");
    init = InitialState::coherent(theta, phi);
  } else if (kind == static_cast<std::uint32_t>(InitialState::Kind::explicit_amplitudes)) {
    init.kind = InitialState::Kind::explicit_amplitudes;
    init.amplitudes.resize(d);
    for (std::uint32_t i = 0; i < d; ++i) {
      const double re = get_f64(in, "initial amplitudes");
      const double im = get_f64(in, "initial amplitudes");
      init.amplitudes[i] = Complex(re, im);
    }
  } else {
    throw FormatError("ensemble file: unknown initial-state kind " + std::to_string(kind));
  }

  ComplexMatrix vectors(d, n);
  std::vector<unsigned char> buf(static_cast<std::size_t>(d) * 16);
  for (std::uint32_t col = 0; col < n; ++col) {
    read_exact(in, buf.data(), buf.size(), "vectors");
    for (std::uint32_t i = 0; i < d; ++i) {
      std::uint64_t re = 0, im = 0;
      for (int b = 0; b < 8; ++b) {
        re |= static_cast<std::uint64_t>(buf[16 * i + b]) << (8 * b);
        im |= static_cast<std::uint64_t>(buf[16 * i + 8 + b]) << (8 * b);
      }
      vectors(i, col) = Complex(std::bit_cast<double>(re), std::bit_cast<double>(im));
    }
  }
  std::vector<double> q(n);
  for (auto& x : q) x = get_f64(in, "probabilities");

  try {
    return VectorEnsemble(std::move(vectors), std::move(q), params, std::move(init));
  } catch (const InvalidParameter& e) {
    throw FormatError(std::string("ensemble file: ") + e.what());
  }
}

void save_ensemble(const std::filesystem::path& path, const VectorEnsemble& ensemble) {
  auto tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error("ensemble file: cannot open " + tmp.string() + " for writing");
    }
    try {
      write_ensemble(out, ensemble);
      out.close();
      if (!out) throw Error("ensemble file: write to " + tmp.string() + " failed");
    } catch (...) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw;
    }
  }
  std::filesystem::rename(tmp, path);
}

VectorEnsemble load_ensemble(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError("ensemble file: cannot open " + path.string());
  }
  return read_ensemble(in);
}

}  // namespace hypersens
