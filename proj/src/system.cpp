#include "hylent/system.hpp"

#include <cmath>

#include <fmt/format.h>

#include "hylent/errors.hpp"

namespace hylent {

ParticleMass ParticleMass::finite(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw InvalidArgument(fmt::format("particle mass must be positive and finite, got {}", m));
  }
  ParticleMass out;
  out.value_ = m;
  return out;
}

ParticleMass ParticleMass::from_inverse(double inverse_mass) {
  if (!(inverse_mass >= 0.0) || !std::isfinite(inverse_mass)) {
    throw InvalidArgument(fmt::format("inverse mass must be non-negative, got {}", inverse_mass));
  }
  if (inverse_mass == 0.0) return infinite();
  return finite(1.0 / inverse_mass);
}

void SystemSpec::validate() const {
  if (!(Z > 0.0) || !std::isfinite(Z)) {
    throw InvalidArgument(fmt::format("nuclear charge must be positive, got {}", Z));
  }
  if (!m3.is_infinite() && !(m3.value() > 0.0)) {
    throw InvalidArgument(fmt::format("positive-particle mass must be positive, got {}", m3.value()));
  }
}

SystemSpec SystemSpec::helium() { return {2.0, ParticleMass::infinite(), "helium"}; }
SystemSpec SystemSpec::hydrogen_anion() { return {1.0, ParticleMass::infinite(), "h-minus"}; }
SystemSpec SystemSpec::positronium_anion() { return {1.0, ParticleMass::finite(1.0), "ps-minus"}; }

SystemSpec SystemSpec::preset(std::string_view name) {
  if (name == "helium" || name == "he") return helium();
  if (name == "h-minus" || name == "hydrogen_anion") return hydrogen_anion();
  if (name == "ps-minus" || name == "positronium_anion") return positronium_anion();
  throw InvalidArgument(fmt::format("unknown system preset '{}'", name));
}

std::vector<std::string> SystemSpec::preset_names() { return {"helium", "h-minus", "ps-minus"}; }

HamiltonianParams reduced_parameters(const SystemSpec& spec) {
  spec.validate();
  HamiltonianParams p;
  p.Z = spec.Z;
  if (spec.m3.is_infinite()) {
    p.mu = 1.0;
    p.c_mp = 0.0;
  } else {
    const double m = spec.m3.value();
    p.mu = m / (m + 1.0);
    p.c_mp = 1.0 / m;
  }
  return p;
}

}  // namespace hylent
