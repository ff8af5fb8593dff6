#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace minarea {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Seed-addressed random stream. Every randomized routine in the toolkit
// draws from one of these, so runs with equal seeds are reproducible.
// The gaussian uses Marsaglia's polar method instead of
// std::normal_distribution, whose algorithm is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : gen_(splitmix64(seed) ^ splitmix64(splitmix64(stream) + 0x632be59bd9b4e019ull)) {}

  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  std::uint64_t integer(std::uint64_t bound) { return gen_() % bound; }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  Eigen::VectorXd gaussian_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = gaussian();
    return v;
  }

  // Uniform on the unit sphere in R^n.
  Eigen::VectorXd unit_vector(int n) {
    for (;;) {
      Eigen::VectorXd v = gaussian_vector(n);
      const double norm = v.norm();
      if (norm > 1e-12) return v / norm;
    }
  }

  // Uniform in the closed ball of the given radius.
  Eigen::VectorXd ball_point(int n, double radius = 1.0) {
    const double u = uniform01();
    return unit_vector(n) * (radius * std::pow(u, 1.0 / n));
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace minarea
