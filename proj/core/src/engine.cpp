#include "engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fedsq/error.hpp"

namespace fedsq::detail {

namespace {

[[noreturn]] void layer_error(std::size_t index, LayerKind kind, const std::string& msg) {
  throw ConfigError("layer " + std::to_string(index) + " (" + layer_kind_name(kind) + "): " + msg);
}

void check_finite(const Tensor& t, std::size_t index, LayerKind kind) {
  if (!t.all_finite()) {
    throw NumericError("layer " + std::to_string(index) + " (" + layer_kind_name(kind) +
                       ") produced non-finite values");
  }
}

Tensor dense_fwd(const Tensor& x, const LayerSpec& l, const Tensor& w, const Tensor& b,
                 std::size_t index) {
  const std::size_t n = x.shape[0];
  const std::size_t din = l.in_dim;
  const std::size_t dout = l.out_dim;
  if (x.shape.size() != 2 || x.shape[1] != din) {
    layer_error(index, l.kind, "input shape " + shape_str(x.shape) + " incompatible with in_dim " +
                                   std::to_string(din));
  }
  if (w.shape != std::vector<std::size_t>{dout, din} || b.shape != std::vector<std::size_t>{dout}) {
    layer_error(index, l.kind, "parameter shapes do not match the layer spec");
  }
  Tensor z = Tensor::zeros({n, dout});
  for (std::size_t i = 0; i < n; ++i) {
    const real* xi = &x.data[i * din];
    for (std::size_t o = 0; o < dout; ++o) {
      const real* wo = &w.data[o * din];
      real acc = b.data[o];
      for (std::size_t d = 0; d < din; ++d) acc += xi[d] * wo[d];
      z.data[i * dout + o] = acc;
    }
  }
  return z;
}

Tensor conv2d_fwd(const Tensor& x, const LayerSpec& l, const Tensor& w, const Tensor& b,
                  std::size_t index) {
  if (x.shape.size() != 4 || x.shape[1] != l.in_ch) {
    layer_error(index, l.kind, "input shape " + shape_str(x.shape) + " incompatible with in_ch " +
                                   std::to_string(l.in_ch));
  }
  const std::size_t n = x.shape[0], c_in = l.in_ch, h = x.shape[2], wd = x.shape[3];
  const std::size_t c_out = l.out_ch, k = l.kernel, s = l.stride, p = l.padding;
  if (w.shape != std::vector<std::size_t>{c_out, c_in, k, k} ||
      b.shape != std::vector<std::size_t>{c_out}) {
    layer_error(index, l.kind, "parameter shapes do not match the layer spec");
  }
  if (h + 2 * p < k || wd + 2 * p < k) {
    layer_error(index, l.kind, "kernel exceeds padded input");
  }
  const std::size_t ho = (h + 2 * p - k) / s + 1;
  const std::size_t wo = (wd + 2 * p - k) / s + 1;
  Tensor z = Tensor::zeros({n, c_out, ho, wo});
  for (std::size_t in = 0; in < n; ++in) {
    for (std::size_t oc = 0; oc < c_out; ++oc) {
      for (std::size_t i = 0; i < ho; ++i) {
        for (std::size_t j = 0; j < wo; ++j) {
          real acc = b.data[oc];
          for (std::size_t ic = 0; ic < c_in; ++ic) {
            for (std::size_t u = 0; u < k; ++u) {
              const std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(i * s + u) -
                                        static_cast<std::ptrdiff_t>(p);
              if (hi < 0 || hi >= static_cast<std::ptrdiff_t>(h)) continue;
              for (std::size_t v = 0; v < k; ++v) {
                const std::ptrdiff_t wi = static_cast<std::ptrdiff_t>(j * s + v) -
                                          static_cast<std::ptrdiff_t>(p);
                if (wi < 0 || wi >= static_cast<std::ptrdiff_t>(wd)) continue;
                acc += x.data[((in * c_in + ic) * h + hi) * wd + wi] *
                       w.data[((oc * c_in + ic) * k + u) * k + v];
              }
            }
          }
          z.data[((in * c_out + oc) * ho + i) * wo + j] = acc;
        }
      }
    }
  }
  return z;
}

Tensor flatten_fwd(const Tensor& x, std::size_t index) {
  if (x.shape.size() < 3) {
    layer_error(index, LayerKind::Flatten, "expects a batched multi-axis input, got " +
                                               shape_str(x.shape));
  }
  std::size_t rest = 1;
  for (std::size_t d = 1; d < x.shape.size(); ++d) rest *= x.shape[d];
  Tensor out = x;
  out.shape = {x.shape[0], rest};
  return out;
}

void dense_bwd(const Tensor& x, const Tensor& dz, const LayerSpec& l, const Tensor& w,
               bool want_params, Tensor* dw, Tensor* db, Tensor* dx) {
  const std::size_t n = x.shape[0], din = l.in_dim, dout = l.out_dim;
  if (want_params) {
    *dw = Tensor::zeros({dout, din});
    *db = Tensor::zeros({dout});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t o = 0; o < dout; ++o) {
        const real g = dz.data[i * dout + o];
        db->data[o] += g;
        for (std::size_t d = 0; d < din; ++d) dw->data[o * din + d] += g * x.data[i * din + d];
      }
    }
  }
  if (dx) {
    *dx = Tensor::zeros({n, din});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t o = 0; o < dout; ++o) {
        const real g = dz.data[i * dout + o];
        for (std::size_t d = 0; d < din; ++d) dx->data[i * din + d] += g * w.data[o * din + d];
      }
    }
  }
}

void conv2d_bwd(const Tensor& x, const Tensor& dz, const LayerSpec& l, const Tensor& w,
                bool want_params, Tensor* dw, Tensor* db, Tensor* dx) {
  const std::size_t n = x.shape[0], c_in = l.in_ch, h = x.shape[2], wd = x.shape[3];
  const std::size_t c_out = l.out_ch, k = l.kernel, s = l.stride, p = l.padding;
  const std::size_t ho = dz.shape[2], wo = dz.shape[3];
  if (want_params) {
    *dw = Tensor::zeros({c_out, c_in, k, k});
    *db = Tensor::zeros({c_out});
  }
  if (dx) *dx = Tensor::zeros(x.shape);
  for (std::size_t in = 0; in < n; ++in) {
    for (std::size_t oc = 0; oc < c_out; ++oc) {
      for (std::size_t i = 0; i < ho; ++i) {
        for (std::size_t j = 0; j < wo; ++j) {
          const real g = dz.data[((in * c_out + oc) * ho + i) * wo + j];
          if (want_params) db->data[oc] += g;
          if (g == real{0} && !want_params) continue;
          for (std::size_t ic = 0; ic < c_in; ++ic) {
            for (std::size_t u = 0; u < k; ++u) {
              const std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(i * s + u) -
                                        static_cast<std::ptrdiff_t>(p);
              if (hi < 0 || hi >= static_cast<std::ptrdiff_t>(h)) continue;
              for (std::size_t v = 0; v < k; ++v) {
                const std::ptrdiff_t wi = static_cast<std::ptrdiff_t>(j * s + v) -
                                          static_cast<std::ptrdiff_t>(p);
                if (wi < 0 || wi >= static_cast<std::ptrdiff_t>(wd)) continue;
                const std::size_t xoff = ((in * c_in + ic) * h + hi) * wd + wi;
                const std::size_t woff = ((oc * c_in + ic) * k + u) * k + v;
                if (want_params) dw->data[woff] += g * x.data[xoff];
                if (dx) dx->data[xoff] += g * w.data[woff];
              }
            }
          }
        }
      }
    }
  }
}

}  // namespace

Tensor run_forward(const ModelArch& arch, const ModelParams& params, const Tensor& x,
                   const std::vector<Tensor>* masks, std::vector<Tensor>* preacts,
                   ForwardTrace* trace) {
  if (x.shape.size() != arch.input_shape.size() + 1 || x.shape[0] == 0 ||
      !std::equal(arch.input_shape.begin(), arch.input_shape.end(), x.shape.begin() + 1)) {
    throw ConfigError("input batch shape " + shape_str(x.shape) +
                      " does not match architecture input " + shape_str(arch.input_shape));
  }
  if (masks && masks->size() != arch.gated_layer_count()) {
    throw InputError("mask set has " + std::to_string(masks->size()) + " entries, architecture has " +
                     std::to_string(arch.gated_layer_count()) + " gated layers");
  }

  Tensor cur = x;
  std::size_t gated_idx = 0;
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const LayerSpec& l = arch.layers[i];
    if (trace) trace->layer_inputs.push_back(cur);
    Tensor z;
    switch (l.kind) {
      case LayerKind::Dense: {
        const ParamEntry* e = params.find(i);
        if (!e) layer_error(i, l.kind, "missing parameters");
        z = dense_fwd(cur, l, e->weights, e->bias, i);
        break;
      }
      case LayerKind::Conv2d: {
        const ParamEntry* e = params.find(i);
        if (!e) layer_error(i, l.kind, "missing parameters");
        z = conv2d_fwd(cur, l, e->weights, e->bias, i);
        break;
      }
      case LayerKind::Flatten:
        z = flatten_fwd(cur, i);
        break;
    }
    check_finite(z, i, l.kind);

    if (l.gated) {
      if (preacts) preacts->push_back(z);
      if (trace) trace->gated_preacts.push_back(z);
      if (masks) {
        const Tensor& m = (*masks)[gated_idx];
        if (!m.same_shape(z)) {
          throw InputError("mask for gated layer " + std::to_string(i) + " has shape " +
                           shape_str(m.shape) + ", pre-activation has " + shape_str(z.shape));
        }
        Tensor h = z;
        for (std::size_t t = 0; t < h.data.size(); ++t) h.data[t] = m.data[t] * z.data[t];
        cur = std::move(h);
      } else {
        Tensor h = z;
        for (auto& v : h.data) v = v > real{0} ? v : real{0};
        cur = std::move(h);
      }
      ++gated_idx;
    } else {
      cur = std::move(z);
    }
  }
  return cur;
}

real ce_loss_and_grad(const Tensor& logits, const std::vector<std::size_t>& labels,
                      Tensor* dlogits) {
  if (logits.shape.size() != 2) {
    throw ConfigError("logits must be [batch, classes], got " + shape_str(logits.shape));
  }
  const std::size_t n = logits.shape[0], c = logits.shape[1];
  if (labels.size() != n) {
    throw InputError("got " + std::to_string(labels.size()) + " labels for a batch of " +
                     std::to_string(n));
  }
  if (dlogits) *dlogits = Tensor::zeros(logits.shape);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t t = labels[i];
    if (t >= c) {
      throw InputError("label " + std::to_string(t) + " out of range for " + std::to_string(c) +
                       " classes");
    }
    const real* row = &logits.data[i * c];
    real m = row[0];
    for (std::size_t j = 1; j < c; ++j) m = std::max(m, row[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < c; ++j) sum += std::exp(static_cast<double>(row[j] - m));
    const double lse = static_cast<double>(m) + std::log(sum);
    loss += lse - static_cast<double>(row[t]);
    if (dlogits) {
      for (std::size_t j = 0; j < c; ++j) {
        const double pj = std::exp(static_cast<double>(row[j] - m)) / sum;
        const double y = (j == t) ? 1.0 : 0.0;
        dlogits->data[i * c + j] = static_cast<real>((pj - y) / static_cast<double>(n));
      }
    }
  }
  return static_cast<real>(loss / static_cast<double>(n));
}

GradientSet run_backward(const ModelArch& arch, const ModelParams& params, const Tensor& x,
                         const std::vector<std::size_t>& labels,
                         const std::vector<Tensor>* masks, const std::vector<bool>& trainable,
                         real* loss_out) {
  if (trainable.size() != arch.param_layer_count()) {
    throw ConfigError("trainable mask has " + std::to_string(trainable.size()) +
                      " flags, architecture has " + std::to_string(arch.param_layer_count()) +
                      " parameterized layers");
  }

  ForwardTrace trace;
  const Tensor logits = run_forward(arch, params, x, masks, nullptr, &trace);
  Tensor g;
  const real loss = ce_loss_and_grad(logits, labels, &g);
  if (loss_out) *loss_out = loss;

  // Map layer index -> position among parameterized layers.
  const auto param_idx = arch.param_layer_indices();
  std::vector<std::ptrdiff_t> param_pos(arch.layers.size(), -1);
  for (std::size_t k = 0; k < param_idx.size(); ++k) param_pos[param_idx[k]] = static_cast<std::ptrdiff_t>(k);

  GradientSet grads;
  grads.arch_id = params.arch_id;
  std::size_t gated_remaining = trace.gated_preacts.size();

  for (std::size_t li = arch.layers.size(); li-- > 0;) {
    const LayerSpec& l = arch.layers[li];
    if (l.gated) {
      --gated_remaining;
      const Tensor& z = trace.gated_preacts[gated_remaining];
      if (masks) {
        const Tensor& m = (*masks)[gated_remaining];
        for (std::size_t t = 0; t < g.data.size(); ++t) g.data[t] *= m.data[t];
      } else {
        for (std::size_t t = 0; t < g.data.size(); ++t) {
          if (!(z.data[t] > real{0})) g.data[t] = real{0};
        }
      }
    }

    const Tensor& x_in = trace.layer_inputs[li];
    const bool want_dx = li > 0;
    switch (l.kind) {
      case LayerKind::Dense:
      case LayerKind::Conv2d: {
        const ParamEntry* e = params.find(li);
        const bool want_params = trainable[static_cast<std::size_t>(param_pos[li])];
        Tensor dw, db, dx;
        if (l.kind == LayerKind::Dense) {
          dense_bwd(x_in, g, l, e->weights, want_params, &dw, &db, want_dx ? &dx : nullptr);
        } else {
          conv2d_bwd(x_in, g, l, e->weights, want_params, &dw, &db, want_dx ? &dx : nullptr);
        }
        if (want_params) {
          ParamEntry ge;
          ge.layer = li;
          ge.weights = std::move(dw);
          ge.bias = std::move(db);
          grads.entries.push_back(std::move(ge));
        }
        if (want_dx) g = std::move(dx);
        break;
      }
      case LayerKind::Flatten: {
        if (want_dx) g.shape = x_in.shape;
        break;
      }
    }
  }

  std::sort(grads.entries.begin(), grads.entries.end(),
            [](const ParamEntry& a, const ParamEntry& b) { return a.layer < b.layer; });
  return grads;
}

}  // namespace fedsq::detail
