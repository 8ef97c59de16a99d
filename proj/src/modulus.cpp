#include "flr/modulus.hpp"

#include <sstream>
#include <stdexcept>

namespace flr {

ModulusSpec ModulusSpec::zero() { return ModulusSpec(); }

ModulusSpec ModulusSpec::holder_sqrt(const Rational& coef, const Rational& sqrt_arg,
                                     const Rational& alpha) {
  if (coef < 0 || sqrt_arg < 0)
    throw std::invalid_argument("ModulusSpec: negative coefficient");
  if (alpha <= 0 || alpha > 1)
    throw std::invalid_argument("ModulusSpec: alpha must lie in (0, 1]");
  ModulusSpec m;
  m.kind_ = Kind::holder;
  m.coef_ = coef;
  m.sqrt_arg_ = sqrt_arg;
  m.alpha_ = alpha;
  return m;
}

ModulusSpec ModulusSpec::holder(const Rational& lambda, const Rational& alpha) {
  return holder_sqrt(lambda, 1, alpha);
}

ModulusSpec ModulusSpec::lipschitz(const Rational& lambda) {
  return holder_sqrt(lambda, 1, 1);
}

ModulusSpec ModulusSpec::lipschitz_sqrt(const Rational& coef, const Rational& sqrt_arg) {
  return holder_sqrt(coef, sqrt_arg, 1);
}

ModulusSpec ModulusSpec::holder_over_dim(const Rational& alpha, int d) {
  if (d < 1) throw std::invalid_argument("ModulusSpec: dimension must be >= 1");
  return holder_sqrt(1, 1, alpha / d);
}

ModulusSpec ModulusSpec::log_reciprocal(int root) {
  if (root < 1) throw std::invalid_argument("ModulusSpec: root must be >= 1");
  ModulusSpec m;
  m.kind_ = Kind::log_reciprocal;
  m.root_ = root;
  return m;
}

ModulusSpec ModulusSpec::from_table(std::vector<std::pair<Rational, Rational>> steps) {
  if (steps.empty()) throw std::invalid_argument("ModulusSpec: empty table");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].first < 0 || steps[i].second < 0)
      throw std::invalid_argument("ModulusSpec: table entries must be nonnegative");
    if (i > 0 && (steps[i].first <= steps[i - 1].first ||
                  steps[i].second < steps[i - 1].second))
      throw std::invalid_argument("ModulusSpec: table must be strictly increasing in r "
                                  "and nondecreasing in omega");
  }
  ModulusSpec m;
  m.kind_ = Kind::table;
  m.table_ = std::move(steps);
  return m;
}

ModulusSpec ModulusSpec::scaled_radius(const Rational& scale) const {
  if (scale <= 0) throw std::invalid_argument("ModulusSpec: scale must be positive");
  ModulusSpec m = *this;
  m.radius_scale_ = radius_scale_ * scale;
  return m;
}

Interval ModulusSpec::eval(const Interval& r, std::int64_t bits) const {
  if (r.lo < 0) throw std::domain_error("ModulusSpec::eval: negative radius");
  Interval rs = ival_scale(r, radius_scale_);
  switch (kind_) {
    case Kind::zero:
      return {0, 0};
    case Kind::holder: {
      Interval sq = sqrt_ival(sqrt_arg_, bits + 8);
      Interval p = pow_ival(rs, alpha_, bits + 8);
      return ival_mul(ival_scale(sq, coef_), p);
    }
    case Kind::log_reciprocal: {
      if (rs.hi >= Rational(1, 2))
        throw std::domain_error("ModulusSpec: log-reciprocal modulus needs scaled radius < 1/2");
      auto at = [&](const Rational& v) -> Interval {
        if (v == 0) return {0, 0};
        // 1 / (-ln v), positive and increasing for v in (0, 1/2).
        Interval l = ival_neg(ln_ival(v, bits + 8));
        Interval rec = ival_recip(l);
        if (root_ == 1) return rec;
        return {root_ival(rec.lo, static_cast<unsigned>(root_), bits + 8).lo,
                root_ival(rec.hi, static_cast<unsigned>(root_), bits + 8).hi};
      };
      return {at(rs.lo).lo, at(rs.hi).hi};
    }
    case Kind::table: {
      auto upper_at = [&](const Rational& v) -> Rational {
        for (const auto& [rr, ww] : table_)
          if (rr >= v) return ww;
        throw std::domain_error("ModulusSpec: radius beyond the table range");
      };
      Rational lo = 0;
      for (const auto& [rr, ww] : table_)
        if (rr <= rs.lo) lo = ww; else break;
      return {lo, upper_at(rs.hi)};
    }
  }
  throw std::logic_error("ModulusSpec: unknown kind");
}

Dyadic ModulusSpec::upper(const Rational& r, std::int64_t bits) const {
  return dyadic_ceil(eval(ival_point(r), bits + 4).hi, bits);
}

std::string ModulusSpec::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::zero: os << "zero"; break;
    case Kind::holder:
      os << "holder coef=" << coef_;
      if (sqrt_arg_ != 1) os << " sqrt_arg=" << sqrt_arg_;
      os << " alpha=" << alpha_;
      break;
    case Kind::log_reciprocal:
      os << "log-reciprocal";
      if (root_ != 1) os << " root=" << root_;
      break;
    case Kind::table: os << "table[" << table_.size() << "]"; break;
  }
  if (radius_scale_ != 1) os << " radius_scale=" << radius_scale_;
  return os.str();
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt n(text.substr(0, slash)), d(text.substr(slash + 1));
    if (d <= 0) throw std::invalid_argument("nonpositive denominator");
    return Rational(n, d);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational literal \"" + text + "\"");
  }
}

ModulusSpec ModulusSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(':', pos);
    if (next == std::string::npos) {
      parts.push_back(text.substr(pos));
      break;
    }
    parts.push_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
  const std::string& head = parts[0];
  auto want = [&](std::size_t n) {
    if (parts.size() != n)
      throw std::invalid_argument("modulus \"" + text + "\": wrong number of fields");
  };
  if (head == "zero") { want(1); return zero(); }
  if (head == "lipschitz") { want(2); return lipschitz(parse_rational(parts[1])); }
  if (head == "holder") { want(3); return holder(parse_rational(parts[2]), parse_rational(parts[1])); }
  if (head == "holder-over-dim") {
    want(3);
    return holder_over_dim(parse_rational(parts[1]), std::stoi(parts[2]));
  }
  if (head == "log") { want(1); return log_reciprocal(); }
  if (head == "log-root") { want(2); return log_reciprocal(std::stoi(parts[1])); }
  throw std::invalid_argument("unknown modulus kind \"" + head + "\"");
}

}  // namespace flr
