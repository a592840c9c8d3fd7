#include "hypernorden/halton.hpp"

#include <array>

#include "hypernorden/errors.hpp"

namespace hypernorden {

namespace {
constexpr std::array<std::uint32_t, 32> kPrimes = {
    2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,  37,  41,  43,  47,  53,
    59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};
}

double halton_radical_inverse(std::uint64_t index, std::uint32_t base) {
  double result = 0.0;
  double f = 1.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    result += f * static_cast<double>(index % base);
    index /= base;
  }
  return result;
}

std::vector<Vector> halton_points(int count, int dim, double box) {
  if (dim <= 0 || dim > static_cast<int>(kPrimes.size()))
    throw DomainError("halton_points: unsupported dimension");
  std::vector<Vector> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 1; i <= count; ++i) {
    Vector x(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) {
      const double h = halton_radical_inverse(static_cast<std::uint64_t>(i), kPrimes[j]);
      x[j] = box * (2.0 * h - 1.0);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

}  // namespace hypernorden
