#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flr/modulus.hpp"

namespace flr {

// A target function together with its declared modulus of continuity.
// eval returns a certified enclosure of f(x) with width <= 2^(1-bits);
// exact targets return degenerate enclosures.
class TargetFunction {
public:
  using Eval = std::function<Interval(const std::vector<Rational>&, std::int64_t)>;

  TargetFunction(std::string id, int dim, ModulusSpec modulus, Eval eval);

  const std::string& id() const { return id_; }
  int dim() const { return dim_; }
  const ModulusSpec& modulus() const { return modulus_; }

  Interval eval(const std::vector<Rational>& x, std::int64_t bits) const;
  Interval value_at_zero(std::int64_t bits) const;

private:
  std::string id_;
  int dim_;
  ModulusSpec modulus_;
  Eval eval_;
};

// Declarative description of a registry target; serializes into
// certificates so verification can rebuild the exact same function.
struct TargetDesc {
  std::string name;                       // const | mean | product | min | spike
  int d = 1;
  std::optional<Rational> alpha;          // spike exponent, default 1/2
  std::optional<Rational> value;          // const value, default 1/2
  std::optional<std::vector<Dyadic>> center;  // spike center, default (1/2,..)
  // Present when the function lives on [-M, M]^d instead of the unit cube.
  std::optional<Dyadic> halfwidth;

  std::string id() const;
};

// Builds the target on its native domain ([0,1]^d, or [-M,M]^d when
// halfwidth is set).  The declared modulus accounts for the domain.
TargetFunction make_target(const TargetDesc& desc);

std::vector<std::string> target_names();
std::string target_help(const std::string& name);

// Affine change of variables u in [0,1]^d  ->  x = low + scale * u.
struct DomainBox {
  Dyadic low;    // per-coordinate lower corner (same in every axis)
  Dyadic scale;  // side length
};
DomainBox domain_box(const TargetDesc& desc);

// Target re-expressed on the unit cube: g(u) = f(low + scale * u), with the
// modulus radius-scaled by `scale`.  Used by the compilers; `halfwidth`
// must be a power of two so the change of variables stays dyadic.
TargetFunction unit_cube_view(const TargetDesc& desc);

}  // namespace flr
