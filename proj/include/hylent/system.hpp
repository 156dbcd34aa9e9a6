#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hylent {

/// Mass of the positive particle in electron masses. An empty value is the
/// infinitely heavy (clamped nucleus) limit.
class ParticleMass {
 public:
  static ParticleMass infinite() { return ParticleMass{}; }
  static ParticleMass finite(double m);
  /// 1/m; zero selects the infinite mass.
  static ParticleMass from_inverse(double inverse_mass);

  bool is_infinite() const { return !value_.has_value(); }
  /// Throws std::bad_optional_access when infinite.
  double value() const { return value_.value(); }
  double inverse() const { return value_ ? 1.0 / *value_ : 0.0; }

  friend bool operator==(const ParticleMass&, const ParticleMass&) = default;

 private:
  std::optional<double> value_;
};

/// Three-body system: two electrons and a positive particle of charge Z.
struct SystemSpec {
  double Z = 2.0;
  ParticleMass m3 = ParticleMass::infinite();
  std::string label;

  /// Throws InvalidArgument unless Z > 0 and m3 > 0 (or infinite).
  void validate() const;

  static SystemSpec helium();
  static SystemSpec hydrogen_anion();
  static SystemSpec positronium_anion();
  /// Accepts "helium", "h-minus", "ps-minus" (and the long aliases).
  static SystemSpec preset(std::string_view name);
  static std::vector<std::string> preset_names();
};

/// Internal-coordinate Hamiltonian
///   H = -(1/2mu)(lap_1 + lap_2) - c_mp grad_1.grad_2 - Z/r1 - Z/r2 + 1/r12.
struct HamiltonianParams {
  double mu = 1.0;
  double c_mp = 0.0;
  double Z = 2.0;
};

HamiltonianParams reduced_parameters(const SystemSpec& spec);

}  // namespace hylent
