#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "flr/dyadic.hpp"

namespace flr {

enum class Act : std::uint8_t { relu, floor };

// Exact affine map y = w*x + b with dyadic entries.
struct AffineMap {
  std::vector<std::vector<Dyadic>> w;  // out_dim rows of in_dim entries
  std::vector<Dyadic> b;

  int in_dim() const { return w.empty() ? 0 : static_cast<int>(w[0].size()); }
  int out_dim() const { return static_cast<int>(b.size()); }

  static AffineMap identity(int dim);
  static AffineMap zeros(int out_dim, int in_dim);

  std::vector<Dyadic> apply(const std::vector<Dyadic>& x) const;
  std::vector<double> apply_f64(const std::vector<double>& x) const;

  // outer(inner(x)) flattened into one affine map, exactly.
  static AffineMap compose(const AffineMap& outer, const AffineMap& inner);

  void validate() const;
};

// One hidden layer: affine map followed by per-neuron relu or floor.
// nonneg marks relu neurons that merely carry values promised nonnegative;
// exact evaluation checks the promise and throws on violation.
struct Layer {
  AffineMap aff;
  std::vector<Act> act;
  std::vector<std::uint8_t> nonneg;

  int width() const { return aff.out_dim(); }
  void validate() const;
};

struct AuditReport {
  int width = 0;
  int depth = 0;
  std::uint64_t nonzero_params = 0;
};

class obligation_error : public std::logic_error {
public:
  obligation_error(int layer, int neuron)
      : std::logic_error("nonnegativity obligation violated at layer " +
                         std::to_string(layer) + ", neuron " + std::to_string(neuron)),
        layer_(layer), neuron_(neuron) {}
  int layer() const { return layer_; }
  int neuron() const { return neuron_; }

private:
  int layer_, neuron_;
};

// Fully connected network: hidden layers then an output affine map.
// Depth counts hidden layers; width is the widest hidden layer.
class Network {
public:
  Network(int input_dim, std::vector<Layer> layers, AffineMap out);
  static Network affine_only(int input_dim, AffineMap out);

  int input_dim() const { return input_dim_; }
  int output_dim() const { return out_.out_dim(); }
  int depth() const { return static_cast<int>(layers_.size()); }
  int width() const;

  const std::vector<Layer>& layers() const { return layers_; }
  const AffineMap& output() const { return out_; }
  // Mutable access exists for fault-injection experiments.
  std::vector<Layer>& layers_mut() { return layers_; }
  AffineMap& output_mut() { return out_; }

  AuditReport audit() const;

  std::vector<Dyadic> eval(const std::vector<Dyadic>& x) const;
  // Post-activation values per hidden layer, then the final output.
  std::vector<std::vector<Dyadic>> eval_trace(const std::vector<Dyadic>& x) const;

  // Diagnostic binary64 backend; obligations are not checked here.
  std::vector<double> eval_f64(const std::vector<double>& x) const;
  std::vector<std::vector<double>> eval_f64_trace(const std::vector<double>& x) const;

private:
  int input_dim_;
  std::vector<Layer> layers_;
  AffineMap out_;
};

// second after first; the output affine of `first` fuses into the first
// layer of `second`, so depths add exactly.
Network compose_serial(const Network& first, const Network& second);

// Independent networks side by side on a concatenated input.  Shallower
// members are padded in front with nonneg passthrough layers.
Network stack_parallel(const std::vector<Network>& members);

// Appends `carried` identity channels: relu neurons with the nonneg
// obligation at every layer, imaged through to extra outputs.
Network with_passthrough(const Network& net, int carried);

// post ∘ net ∘ pre, with both affine maps fused (no extra depth).
Network affine_wrap(const Network& net, const AffineMap& pre, const AffineMap& post);

// Depth-`depth` network carrying `dim` nonnegative values unchanged.
Network carry_network(int dim, int depth);
Network identity_network(int dim);

// Number of parameter positions whose values differ; networks must share
// shape (throws otherwise).
std::uint64_t param_diff_count(const Network& a, const Network& b);

}  // namespace flr
