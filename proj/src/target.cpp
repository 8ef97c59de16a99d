#include "flr/target.hpp"

#include <sstream>
#include <stdexcept>

namespace flr {

TargetFunction::TargetFunction(std::string id, int dim, ModulusSpec modulus, Eval eval)
    : id_(std::move(id)), dim_(dim), modulus_(std::move(modulus)), eval_(std::move(eval)) {
  if (dim_ < 1) throw std::invalid_argument("TargetFunction: dimension must be >= 1");
}

Interval TargetFunction::eval(const std::vector<Rational>& x, std::int64_t bits) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("TargetFunction: point has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(dim_));
  Interval v = eval_(x, bits);
  if (v.lo > v.hi) throw std::logic_error("TargetFunction: inverted enclosure");
  return v;
}

Interval TargetFunction::value_at_zero(std::int64_t bits) const {
  return eval(std::vector<Rational>(dim_, Rational(0)), bits);
}

std::string TargetDesc::id() const {
  std::ostringstream os;
  os << name << "(d=" << d;
  if (name == "spike") {
    os << ",alpha=" << (alpha ? *alpha : Rational(1, 2));
  }
  if (name == "const" && value) os << ",value=" << *value;
  if (halfwidth) os << ",M=" << halfwidth->to_decimal_string();
  os << ")";
  return os.str();
}

namespace {

Rational sq_norm(const std::vector<Rational>& x, const std::vector<Rational>& c) {
  Rational t = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Rational d = x[i] - c[i];
    t += d * d;
  }
  return t;
}

}  // namespace

DomainBox domain_box(const TargetDesc& desc) {
  if (!desc.halfwidth) return {Dyadic(0), Dyadic(1)};
  return {-*desc.halfwidth, Dyadic(2) * *desc.halfwidth};
}

TargetFunction make_target(const TargetDesc& desc) {
  int d = desc.d;
  if (d < 1) throw std::invalid_argument("target: dimension must be >= 1");
  const std::string& name = desc.name;
  std::string id = desc.id();

  // Half-width of the domain, for moduli whose constants depend on it.
  Rational M = desc.halfwidth ? to_rational(*desc.halfwidth) : Rational(1);
  if (desc.halfwidth && M <= 0)
    throw std::invalid_argument("target: halfwidth must be positive");

  if (name == "const") {
    Rational c = desc.value ? *desc.value : Rational(1, 2);
    return TargetFunction(id, d, ModulusSpec::zero(),
                          [c](const std::vector<Rational>&, std::int64_t) {
                            return ival_point(c);
                          });
  }
  if (name == "mean") {
    // f(x) = (x_1 + ... + x_d)/d; gradient norm 1/sqrt(d) everywhere.
    return TargetFunction(id, d, ModulusSpec::lipschitz_sqrt(1, Rational(1, d)),
                          [d](const std::vector<Rational>& x, std::int64_t) {
                            Rational s = 0;
                            for (const auto& v : x) s += v;
                            return ival_point(s / d);
                          });
  }
  if (name == "product") {
    // f(x) = prod x_j; each partial derivative is bounded by max(1,M)^(d-1).
    Rational box = M < 1 ? Rational(1) : M;
    Rational coef = 1;
    for (int i = 0; i < d - 1; ++i) coef *= box;
    return TargetFunction(id, d, ModulusSpec::lipschitz_sqrt(coef, Rational(d)),
                          [](const std::vector<Rational>& x, std::int64_t) {
                            Rational p = 1;
                            for (const auto& v : x) p *= v;
                            return ival_point(p);
                          });
  }
  if (name == "min") {
    // f(x) = min_j x_j is 1-Lipschitz in the euclidean norm.
    return TargetFunction(id, d, ModulusSpec::lipschitz(1),
                          [](const std::vector<Rational>& x, std::int64_t) {
                            Rational m = x[0];
                            for (const auto& v : x)
                              if (v < m) m = v;
                            return ival_point(m);
                          });
  }
  if (name == "spike") {
    Rational alpha = desc.alpha ? *desc.alpha : Rational(1, 2);
    if (alpha <= 0 || alpha > 1)
      throw std::invalid_argument("spike: alpha must lie in (0, 1]");
    std::vector<Rational> center(d, Rational(1, 2));
    if (desc.halfwidth) center.assign(d, Rational(0));
    if (desc.center) {
      if (static_cast<int>(desc.center->size()) != d)
        throw std::invalid_argument("spike: center dimension mismatch");
      center.clear();
      for (const auto& c : *desc.center) center.push_back(to_rational(c));
    }
    // f(x) = |x - center|_2^alpha, a (1, alpha) Holder function.
    return TargetFunction(id, d, ModulusSpec::holder(1, alpha),
                          [center, alpha](const std::vector<Rational>& x, std::int64_t bits) {
                            Rational t = sq_norm(x, center);
                            return pow_ival(ival_point(t), alpha / 2, bits + 2);
                          });
  }
  throw std::invalid_argument("unknown target \"" + name + "\"; known: const, mean, product, min, spike");
}

std::vector<std::string> target_names() {
  return {"const", "mean", "product", "min", "spike"};
}

std::string target_help(const std::string& name) {
  if (name == "const") return "constant function (value, default 1/2); zero modulus";
  if (name == "mean") return "coordinate mean; Lipschitz 1/sqrt(d)";
  if (name == "product") return "coordinate product; Lipschitz sqrt(d)*max(1,M)^(d-1)";
  if (name == "min") return "coordinate minimum; Lipschitz 1";
  if (name == "spike") return "euclidean distance to a center, raised to alpha; Holder (1, alpha)";
  return "";
}

TargetFunction unit_cube_view(const TargetDesc& desc) {
  TargetFunction f = make_target(desc);
  if (!desc.halfwidth) return f;
  const Dyadic& M = *desc.halfwidth;
  if (M.sign() <= 0 || M.mantissa() != 1)
    throw std::invalid_argument(
        "halfwidth must be a positive power of two so the rescaling weight 1/(2M) is dyadic");
  DomainBox box = domain_box(desc);
  Rational low = to_rational(box.low), scale = to_rational(box.scale);
  ModulusSpec scaled = f.modulus().scaled_radius(scale);
  auto inner = f;
  return TargetFunction(
      f.id() + "@unit", desc.d, scaled,
      [inner, low, scale](const std::vector<Rational>& u, std::int64_t bits) {
        std::vector<Rational> x;
        x.reserve(u.size());
        for (const auto& v : u) x.push_back(low + scale * v);
        return inner.eval(x, bits);
      });
}

}  // namespace flr
