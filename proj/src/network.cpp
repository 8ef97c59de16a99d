#include "flr/network.hpp"

#include <algorithm>
#include <cmath>

namespace flr {

AffineMap AffineMap::identity(int dim) {
  AffineMap m;
  m.w.assign(dim, std::vector<Dyadic>(dim));
  m.b.assign(dim, Dyadic());
  for (int i = 0; i < dim; ++i) m.w[i][i] = Dyadic(1);
  return m;
}

AffineMap AffineMap::zeros(int out_dim, int in_dim) {
  AffineMap m;
  m.w.assign(out_dim, std::vector<Dyadic>(in_dim));
  m.b.assign(out_dim, Dyadic());
  return m;
}

void AffineMap::validate() const {
  if (w.size() != b.size()) throw std::invalid_argument("AffineMap: row count != bias count");
  for (const auto& row : w)
    if (row.size() != w[0].size()) throw std::invalid_argument("AffineMap: ragged rows");
}

std::vector<Dyadic> AffineMap::apply(const std::vector<Dyadic>& x) const {
  if (static_cast<int>(x.size()) != in_dim())
    throw std::invalid_argument("AffineMap: input has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(in_dim()));
  std::vector<Dyadic> y(b);
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w[i].size(); ++j)
      if (!w[i][j].is_zero() && !x[j].is_zero()) y[i] += w[i][j] * x[j];
  return y;
}

std::vector<double> AffineMap::apply_f64(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != in_dim())
    throw std::invalid_argument("AffineMap: input dimension mismatch");
  std::vector<double> y(b.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    double acc = b[i].to_double();
    for (std::size_t j = 0; j < w[i].size(); ++j)
      if (!w[i][j].is_zero()) acc += w[i][j].to_double() * x[j];
    y[i] = acc;
  }
  return y;
}

AffineMap AffineMap::compose(const AffineMap& outer, const AffineMap& inner) {
  if (outer.in_dim() != inner.out_dim())
    throw std::invalid_argument("AffineMap::compose: dimension mismatch");
  AffineMap r = AffineMap::zeros(outer.out_dim(), inner.in_dim());
  for (int i = 0; i < outer.out_dim(); ++i) {
    Dyadic bias = outer.b[i];
    for (int k = 0; k < outer.in_dim(); ++k) {
      const Dyadic& oik = outer.w[i][k];
      if (oik.is_zero()) continue;
      bias += oik * inner.b[k];
      for (int j = 0; j < inner.in_dim(); ++j)
        if (!inner.w[k][j].is_zero()) r.w[i][j] += oik * inner.w[k][j];
    }
    r.b[i] = bias;
  }
  return r;
}

void Layer::validate() const {
  aff.validate();
  if (static_cast<int>(act.size()) != aff.out_dim() ||
      static_cast<int>(nonneg.size()) != aff.out_dim())
    throw std::invalid_argument("Layer: activation metadata size mismatch");
  for (std::size_t i = 0; i < act.size(); ++i)
    if (nonneg[i] && act[i] != Act::relu)
      throw std::invalid_argument("Layer: nonneg obligation requires a relu neuron");
}

Network::Network(int input_dim, std::vector<Layer> layers, AffineMap out)
    : input_dim_(input_dim), layers_(std::move(layers)), out_(std::move(out)) {
  if (input_dim <= 0) throw std::invalid_argument("Network: input_dim must be positive");
  int cur = input_dim;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    layers_[i].validate();
    if (layers_[i].aff.in_dim() != cur)
      throw std::invalid_argument("Network: layer " + std::to_string(i) +
                                  " expects dimension " +
                                  std::to_string(layers_[i].aff.in_dim()) +
                                  ", got " + std::to_string(cur));
    cur = layers_[i].width();
  }
  out_.validate();
  if (out_.in_dim() != cur)
    throw std::invalid_argument("Network: output affine dimension mismatch");
}

Network Network::affine_only(int input_dim, AffineMap out) {
  return Network(input_dim, {}, std::move(out));
}

int Network::width() const {
  int w = 0;
  for (const auto& l : layers_) w = std::max(w, l.width());
  return w;
}

namespace {

std::uint64_t count_nonzero(const AffineMap& m) {
  std::uint64_t n = 0;
  for (const auto& row : m.w)
    for (const auto& v : row)
      if (!v.is_zero()) ++n;
  for (const auto& v : m.b)
    if (!v.is_zero()) ++n;
  return n;
}

}  // namespace

AuditReport Network::audit() const {
  AuditReport r;
  r.width = width();
  r.depth = depth();
  r.nonzero_params = count_nonzero(out_);
  for (const auto& l : layers_) r.nonzero_params += count_nonzero(l.aff);
  return r;
}

std::vector<std::vector<Dyadic>> Network::eval_trace(const std::vector<Dyadic>& x) const {
  if (static_cast<int>(x.size()) != input_dim_)
    throw std::invalid_argument("Network::eval: input has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(input_dim_));
  std::vector<std::vector<Dyadic>> trace;
  trace.reserve(layers_.size() + 1);
  std::vector<Dyadic> cur = x;
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const Layer& l = layers_[li];
    std::vector<Dyadic> pre = l.aff.apply(cur);
    for (std::size_t i = 0; i < pre.size(); ++i) {
      if (l.act[i] == Act::relu) {
        if (l.nonneg[i] && pre[i].sign() < 0)
          throw obligation_error(static_cast<int>(li), static_cast<int>(i));
        pre[i] = relu(pre[i]);
      } else {
        pre[i] = pre[i].floor();
      }
    }
    cur = std::move(pre);
    trace.push_back(cur);
  }
  trace.push_back(out_.apply(cur));
  return trace;
}

std::vector<Dyadic> Network::eval(const std::vector<Dyadic>& x) const {
  return eval_trace(x).back();
}

std::vector<std::vector<double>> Network::eval_f64_trace(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != input_dim_)
    throw std::invalid_argument("Network::eval_f64: input dimension mismatch");
  std::vector<std::vector<double>> trace;
  trace.reserve(layers_.size() + 1);
  std::vector<double> cur = x;
  for (const Layer& l : layers_) {
    std::vector<double> pre = l.aff.apply_f64(cur);
    for (std::size_t i = 0; i < pre.size(); ++i)
      pre[i] = l.act[i] == Act::relu ? std::max(0.0, pre[i]) : std::floor(pre[i]);
    cur = std::move(pre);
    trace.push_back(cur);
  }
  trace.push_back(out_.apply_f64(cur));
  return trace;
}

std::vector<double> Network::eval_f64(const std::vector<double>& x) const {
  return eval_f64_trace(x).back();
}

Network compose_serial(const Network& first, const Network& second) {
  if (second.input_dim() != first.output_dim())
    throw std::invalid_argument("compose_serial: interface dimension mismatch");
  if (second.depth() == 0) {
    return Network(first.input_dim(), first.layers(),
                   AffineMap::compose(second.output(), first.output()));
  }
  std::vector<Layer> layers = first.layers();
  Layer fused = second.layers()[0];
  fused.aff = AffineMap::compose(fused.aff, first.output());
  layers.push_back(std::move(fused));
  layers.insert(layers.end(), second.layers().begin() + 1, second.layers().end());
  return Network(first.input_dim(), std::move(layers), second.output());
}

Network carry_network(int dim, int depth) {
  std::vector<Layer> layers;
  layers.reserve(depth);
  for (int k = 0; k < depth; ++k) {
    Layer l;
    l.aff = AffineMap::identity(dim);
    l.act.assign(dim, Act::relu);
    l.nonneg.assign(dim, 1);
    layers.push_back(std::move(l));
  }
  return Network(dim, std::move(layers), AffineMap::identity(dim));
}

Network identity_network(int dim) {
  return Network::affine_only(dim, AffineMap::identity(dim));
}

Network stack_parallel(const std::vector<Network>& members) {
  if (members.empty()) throw std::invalid_argument("stack_parallel: no members");
  int depth = 0;
  for (const auto& m : members) depth = std::max(depth, m.depth());
  std::vector<Network> padded;
  padded.reserve(members.size());
  for (const auto& m : members)
    padded.push_back(m.depth() == depth
                         ? m
                         : compose_serial(carry_network(m.input_dim(), depth - m.depth()), m));

  int in_total = 0, out_total = 0;
  for (const auto& m : padded) {
    in_total += m.input_dim();
    out_total += m.output_dim();
  }
  std::vector<Layer> layers;
  layers.reserve(depth);
  int cur_total = in_total;
  std::vector<int> cur_offsets(padded.size()), cur_dims(padded.size());
  {
    int off = 0;
    for (std::size_t mi = 0; mi < padded.size(); ++mi) {
      cur_offsets[mi] = off;
      cur_dims[mi] = padded[mi].input_dim();
      off += cur_dims[mi];
    }
  }
  for (int li = 0; li < depth; ++li) {
    int next_total = 0;
    for (const auto& m : padded) next_total += m.layers()[li].width();
    Layer merged;
    merged.aff = AffineMap::zeros(next_total, cur_total);
    merged.act.reserve(next_total);
    merged.nonneg.reserve(next_total);
    int row = 0;
    for (std::size_t mi = 0; mi < padded.size(); ++mi) {
      const Layer& l = padded[mi].layers()[li];
      for (int i = 0; i < l.width(); ++i) {
        for (int j = 0; j < l.aff.in_dim(); ++j)
          merged.aff.w[row][cur_offsets[mi] + j] = l.aff.w[i][j];
        merged.aff.b[row] = l.aff.b[i];
        merged.act.push_back(l.act[i]);
        merged.nonneg.push_back(l.nonneg[i]);
        ++row;
      }
    }
    layers.push_back(std::move(merged));
    int off = 0;
    for (std::size_t mi = 0; mi < padded.size(); ++mi) {
      cur_offsets[mi] = off;
      cur_dims[mi] = padded[mi].layers()[li].width();
      off += cur_dims[mi];
    }
    cur_total = next_total;
  }
  AffineMap out = AffineMap::zeros(out_total, cur_total);
  int row = 0;
  for (std::size_t mi = 0; mi < padded.size(); ++mi) {
    const AffineMap& mo = padded[mi].output();
    for (int i = 0; i < mo.out_dim(); ++i) {
      for (int j = 0; j < mo.in_dim(); ++j)
        out.w[row][cur_offsets[mi] + j] = mo.w[i][j];
      out.b[row] = mo.b[i];
      ++row;
    }
  }
  return Network(in_total, std::move(layers), std::move(out));
}

Network with_passthrough(const Network& net, int carried) {
  if (carried < 0) throw std::invalid_argument("with_passthrough: negative count");
  if (carried == 0) return net;
  if (net.depth() == 0) {
    // Pure affine: extend the map with identity rows for the carried channels.
    AffineMap out = AffineMap::zeros(net.output_dim() + carried, net.input_dim() + carried);
    for (int i = 0; i < net.output_dim(); ++i) {
      for (int j = 0; j < net.input_dim(); ++j) out.w[i][j] = net.output().w[i][j];
      out.b[i] = net.output().b[i];
    }
    for (int c = 0; c < carried; ++c)
      out.w[net.output_dim() + c][net.input_dim() + c] = Dyadic(1);
    return Network::affine_only(net.input_dim() + carried, std::move(out));
  }
  std::vector<Layer> layers;
  layers.reserve(net.depth());
  int prev_extra_at = net.input_dim();
  for (const Layer& l : net.layers()) {
    Layer nl;
    nl.aff = AffineMap::zeros(l.width() + carried, prev_extra_at + carried);
    for (int i = 0; i < l.width(); ++i) {
      for (int j = 0; j < l.aff.in_dim(); ++j) nl.aff.w[i][j] = l.aff.w[i][j];
      nl.aff.b[i] = l.aff.b[i];
    }
    nl.act = l.act;
    nl.nonneg = l.nonneg;
    for (int c = 0; c < carried; ++c) {
      nl.aff.w[l.width() + c][prev_extra_at + c] = Dyadic(1);
      nl.act.push_back(Act::relu);
      nl.nonneg.push_back(1);
    }
    layers.push_back(std::move(nl));
    prev_extra_at = l.width();
  }
  AffineMap out = AffineMap::zeros(net.output_dim() + carried, prev_extra_at + carried);
  for (int i = 0; i < net.output_dim(); ++i) {
    for (int j = 0; j < net.output().in_dim(); ++j) out.w[i][j] = net.output().w[i][j];
    out.b[i] = net.output().b[i];
  }
  for (int c = 0; c < carried; ++c)
    out.w[net.output_dim() + c][prev_extra_at + c] = Dyadic(1);
  return Network(net.input_dim() + carried, std::move(layers), std::move(out));
}

Network affine_wrap(const Network& net, const AffineMap& pre, const AffineMap& post) {
  if (pre.out_dim() != net.input_dim() || post.in_dim() != net.output_dim())
    throw std::invalid_argument("affine_wrap: dimension mismatch");
  if (net.depth() == 0) {
    return Network::affine_only(
        pre.in_dim(),
        AffineMap::compose(post, AffineMap::compose(net.output(), pre)));
  }
  std::vector<Layer> layers = net.layers();
  layers[0].aff = AffineMap::compose(layers[0].aff, pre);
  return Network(pre.in_dim(), std::move(layers),
                 AffineMap::compose(post, net.output()));
}

namespace {

std::uint64_t diff_count(const AffineMap& a, const AffineMap& b) {
  if (a.out_dim() != b.out_dim() || a.in_dim() != b.in_dim())
    throw std::invalid_argument("param_diff_count: shape mismatch");
  std::uint64_t n = 0;
  for (int i = 0; i < a.out_dim(); ++i) {
    for (int j = 0; j < a.in_dim(); ++j)
      if (a.w[i][j] != b.w[i][j]) ++n;
    if (a.b[i] != b.b[i]) ++n;
  }
  return n;
}

}  // namespace

std::uint64_t param_diff_count(const Network& a, const Network& b) {
  if (a.depth() != b.depth() || a.input_dim() != b.input_dim())
    throw std::invalid_argument("param_diff_count: shape mismatch");
  std::uint64_t n = 0;
  for (int i = 0; i < a.depth(); ++i)
    n += diff_count(a.layers()[i].aff, b.layers()[i].aff);
  return n + diff_count(a.output(), b.output());
}

}  // namespace flr
