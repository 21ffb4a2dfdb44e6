#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace lemniscatic {

using Complex = std::complex<double>;

/// Real samples aligned with the nodes of a Discretization (component blocks contiguous).
using GridFunction = std::vector<double>;
using ComplexGrid = std::vector<Complex>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Pipeline stage that raised an error; carried by every Error so the CLI can report it.
enum class Stage { input, geometry, kernels, bie, parameters, newton, cauchy, oracle, output };

const char* stage_name(Stage stage);

class Error : public std::runtime_error {
 public:
  Error(Stage stage, const std::string& what)
      : std::runtime_error(std::string(stage_name(stage)) + ": " + what), stage_(stage) {}

  Stage stage() const noexcept { return stage_; }

 private:
  Stage stage_;
};

inline const char* stage_name(Stage stage) {
  switch (stage) {
    case Stage::input: return "input";
    case Stage::geometry: return "geometry";
    case Stage::kernels: return "kernels";
    case Stage::bie: return "bie";
    case Stage::parameters: return "parameters";
    case Stage::newton: return "newton";
    case Stage::cauchy: return "cauchy";
    case Stage::oracle: return "oracle";
    case Stage::output: return "output";
  }
  return "unknown";
}

}  // namespace lemniscatic
