#include "torusflow/snapshot.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "torusflow/errors.hpp"

namespace torusflow {

namespace {
constexpr const char* kMagic = "torusflow-spectral v1 n=";
constexpr double kHermitianTolerance = 1e-10;

bool parse_int(const std::string& t, int& out) {
  char* end = nullptr;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size()) return false;
  out = static_cast<int>(v);
  return true;
}

// strtod keeps subnormals intact, unlike stream extraction.
bool parse_double(const std::string& t, double& out) {
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}
}  // namespace

void write_snapshot(std::ostream& os, const SpectralField& f) {
  os << kMagic << f.cutoff() << '\n';
  char line[128];
  f.for_each_mode([&](int k1, int k2, Complex c) {
    std::snprintf(line, sizeof line, "%d %d %.17g %.17g\n", k1, k2, c.real(), c.imag());
    os << line;
  });
}

void write_snapshot(const std::filesystem::path& path, const SpectralField& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open snapshot for writing: " + path.string());
  write_snapshot(os, f);
  if (!os) throw std::runtime_error("failed writing snapshot: " + path.string());
}

SpectralField read_snapshot(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind(kMagic, 0) != 0)
    throw FormatError("snapshot: missing 'torusflow-spectral v1' header");
  int n = 0;
  try {
    std::size_t used = 0;
    const std::string tail = header.substr(std::char_traits<char>::length(kMagic));
    n = std::stoi(tail, &used);
    if (used != tail.size()) throw FormatError("trailing characters");
  } catch (const std::exception&) {
    throw FormatError("snapshot: bad cutoff in header '" + header + "'");
  }
  if (n < 1) throw FormatError("snapshot: cutoff must be >= 1");

  const ModeSet modes(n);
  std::vector<Complex> coeff(modes.size());
  std::string line;
  std::size_t count = 0;
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2) {
      if (!std::getline(is, line)) throw FormatError("snapshot: truncated mode list");
      std::istringstream ls(line);
      std::string t1, t2, t3, t4, extra;
      if (!(ls >> t1 >> t2 >> t3 >> t4) || (ls >> extra))
        throw FormatError("snapshot: malformed line '" + line + "'");
      int r1 = 0, r2 = 0;
      double re = 0, im = 0;
      if (!parse_int(t1, r1) || !parse_int(t2, r2) || !parse_double(t3, re) || !parse_double(t4, im))
        throw FormatError("snapshot: malformed line '" + line + "'");
      if (r1 != k1 || r2 != k2)
        throw FormatError("snapshot: expected mode (" + std::to_string(k1) + "," + std::to_string(k2) + "), got '" +
                          line + "'");
      if (!std::isfinite(re) || !std::isfinite(im)) throw FormatError("snapshot: non-finite coefficient");
      coeff[count++] = Complex{re, im};
    }
  while (std::getline(is, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) throw FormatError("snapshot: unexpected trailing data");

  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2)
      if (std::abs(coeff[modes.index(-k1, -k2)] - std::conj(coeff[modes.index(k1, k2)])) > kHermitianTolerance)
        throw FormatError("snapshot: Hermitian symmetry violated at k=(" + std::to_string(k1) + "," +
                          std::to_string(k2) + ")");
  return SpectralField::hermitian_part(modes, std::move(coeff));
}

SpectralField read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open snapshot: " + path.string());
  return read_snapshot(is);
}

}  // namespace torusflow
