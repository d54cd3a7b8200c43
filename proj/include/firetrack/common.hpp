#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace firetrack {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

using Vector2d = Vec2<double>;
using Vector3d = Vec3<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Error types. Infeasibility of a bound or a plan is reported as a value,
// these are reserved for contract violations.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct SingularResidual : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidSplit : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NoUavAvailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_path(std::move(field)) {}
  std::string field_path;
};

using Rng = std::mt19937_64;

/// splitmix64 finalizer, used to derive independent substreams.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Random stream keyed by (seed, stream id, step). Draws for one key never
/// depend on the order in which other keys are consumed.
inline Rng substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t step) {
  return Rng(mix64(mix64(mix64(seed) ^ stream) ^ (step * 0xD1B54A32D192ED03ULL)));
}

/// Wraps an angle into [0, 2pi).
template <typename Scalar>
Scalar wrap_two_pi(Scalar a) {
  using std::fmod;
  Scalar w = fmod(a, Scalar(kTwoPi));
  if (w < Scalar(0)) w += Scalar(kTwoPi);
  if (w >= Scalar(kTwoPi)) w = Scalar(0);
  return w;
}

/// Wraps an angle into (-pi, pi].
template <typename Scalar>
Scalar wrap_pi(Scalar a) {
  Scalar w = wrap_two_pi(a);
  if (w > Scalar(kPi)) w -= Scalar(kTwoPi);
  return w;
}

}  // namespace firetrack
