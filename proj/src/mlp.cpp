#include "drlb/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "drlb/numio.hpp"
#include "drlb/rng.hpp"

namespace drlb {

namespace {

std::vector<std::vector<double>> shaped_like(const std::vector<int>& sizes, bool weights) {
  std::vector<std::vector<double>> out;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const std::size_t fan_in = static_cast<std::size_t>(sizes[l]);
    const std::size_t fan_out = static_cast<std::size_t>(sizes[l + 1]);
    out.emplace_back(weights ? fan_in * fan_out : fan_out, 0.0);
  }
  return out;
}

}  // namespace

void MlpNetwork::check_topology() const {
  if (sizes_.size() < 2) throw std::invalid_argument("network needs >= 2 layers");
  for (int s : sizes_)
    if (s < 1) throw std::invalid_argument("layer size must be >= 1");
}

MlpNetwork::MlpNetwork(std::vector<int> layer_sizes, std::uint64_t init_seed)
    : sizes_(std::move(layer_sizes)) {
  check_topology();
  weights_ = shaped_like(sizes_, true);
  biases_ = shaped_like(sizes_, false);
  weight_momentum_ = shaped_like(sizes_, true);
  bias_momentum_ = shaped_like(sizes_, false);
  Rng rng(init_seed);
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const double span = std::sqrt(6.0 / (sizes_[l] + sizes_[l + 1]));
    for (double& w : weights_[l]) w = rng.uniform(-span, span);
  }
}

MlpNetwork MlpNetwork::zeros(std::vector<int> layer_sizes) {
  MlpNetwork net;
  net.sizes_ = std::move(layer_sizes);
  net.check_topology();
  net.weights_ = shaped_like(net.sizes_, true);
  net.biases_ = shaped_like(net.sizes_, false);
  net.weight_momentum_ = shaped_like(net.sizes_, true);
  net.bias_momentum_ = shaped_like(net.sizes_, false);
  return net;
}

void MlpNetwork::forward_cached(const std::vector<double>& input, Workspace& ws) const {
  if (input.size() != static_cast<std::size_t>(sizes_.front()))
    throw std::invalid_argument("input size mismatch");
  const std::size_t L = sizes_.size() - 1;
  ws.activations.assign(L + 1, {});
  ws.preacts.assign(L, {});
  ws.activations[0] = input;
  for (std::size_t l = 0; l < L; ++l) {
    const std::size_t fan_in = static_cast<std::size_t>(sizes_[l]);
    const std::size_t fan_out = static_cast<std::size_t>(sizes_[l + 1]);
    auto& z = ws.preacts[l];
    z.assign(fan_out, 0.0);
    const auto& x = ws.activations[l];
    const auto& w = weights_[l];
    for (std::size_t o = 0; o < fan_out; ++o) {
      double acc = biases_[l][o];
      const double* row = w.data() + o * fan_in;
      for (std::size_t i = 0; i < fan_in; ++i) acc += row[i] * x[i];
      z[o] = acc;
    }
    auto& a = ws.activations[l + 1];
    a = z;
    if (l + 1 < L)
      for (double& v : a) v = v > 0.0 ? v : 0.0;
  }
}

std::vector<double> MlpNetwork::forward(const std::vector<double>& input) const {
  Workspace ws;
  forward_cached(input, ws);
  return ws.activations.back();
}

void MlpNetwork::accumulate_gradients(const Workspace& ws, double out_grad,
                                      int out_index,
                                      std::vector<std::vector<double>>& wgrad,
                                      std::vector<std::vector<double>>& bgrad) const {
  const std::size_t L = sizes_.size() - 1;
  if (out_index < 0 || out_index >= sizes_.back())
    throw std::invalid_argument("output index out of range");

  // delta starts as the gradient w.r.t. the selected linear output.
  std::vector<double> delta(static_cast<std::size_t>(sizes_.back()), 0.0);
  delta[static_cast<std::size_t>(out_index)] = out_grad;

  for (std::size_t l = L; l-- > 0;) {
    const std::size_t fan_in = static_cast<std::size_t>(sizes_[l]);
    const std::size_t fan_out = static_cast<std::size_t>(sizes_[l + 1]);
    const auto& x = ws.activations[l];
    for (std::size_t o = 0; o < fan_out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      bgrad[l][o] += d;
      double* wg = wgrad[l].data() + o * fan_in;
      for (std::size_t i = 0; i < fan_in; ++i) wg[i] += d * x[i];
    }
    if (l == 0) break;
    std::vector<double> prev(fan_in, 0.0);
    const auto& w = weights_[l];
    for (std::size_t o = 0; o < fan_out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      const double* row = w.data() + o * fan_in;
      for (std::size_t i = 0; i < fan_in; ++i) prev[i] += d * row[i];
    }
    // ReLU mask of the layer below.
    for (std::size_t i = 0; i < fan_in; ++i)
      if (ws.preacts[l - 1][i] <= 0.0) prev[i] = 0.0;
    delta = std::move(prev);
  }
}

double MlpNetwork::sgd_step(const std::vector<std::vector<double>>& inputs,
                            const std::vector<double>& targets,
                            const std::vector<int>& output_indices,
                            const TrainConfig& cfg) {
  if (inputs.empty()) throw std::invalid_argument("empty batch");
  if (inputs.size() != targets.size() || inputs.size() != output_indices.size())
    throw std::invalid_argument("batch size mismatch");

  auto wgrad = shaped_like(sizes_, true);
  auto bgrad = shaped_like(sizes_, false);
  const double inv_n = 1.0 / static_cast<double>(inputs.size());
  double loss = 0.0;
  Workspace ws;
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    forward_cached(inputs[j], ws);
    const int idx = output_indices[j];
    if (idx < 0 || idx >= sizes_.back())
      throw std::invalid_argument("output index out of range");
    const double err = ws.activations.back()[static_cast<std::size_t>(idx)] - targets[j];
    loss += err * err;
    accumulate_gradients(ws, 2.0 * err * inv_n, idx, wgrad, bgrad);
  }
  loss *= inv_n;

  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    for (std::size_t k = 0; k < weights_[l].size(); ++k) {
      weight_momentum_[l][k] = cfg.momentum * weight_momentum_[l][k] + wgrad[l][k];
      weights_[l][k] -= cfg.learning_rate * weight_momentum_[l][k];
    }
    for (std::size_t k = 0; k < biases_[l].size(); ++k) {
      bias_momentum_[l][k] = cfg.momentum * bias_momentum_[l][k] + bgrad[l][k];
      biases_[l][k] -= cfg.learning_rate * bias_momentum_[l][k];
    }
  }
  return loss;
}

double MlpNetwork::gradient_check(const std::vector<double>& input, double target,
                                  int output_index, double h) const {
  auto wgrad = shaped_like(sizes_, true);
  auto bgrad = shaped_like(sizes_, false);
  Workspace ws;
  forward_cached(input, ws);
  const double err = ws.activations.back()[static_cast<std::size_t>(output_index)] - target;
  accumulate_gradients(ws, 2.0 * err, output_index, wgrad, bgrad);

  MlpNetwork probe = *this;
  auto loss_at = [&]() {
    const auto out = probe.forward(input);
    const double e = out[static_cast<std::size_t>(output_index)] - target;
    return e * e;
  };
  double max_err = 0.0;
  auto check_param = [&](double& param, double analytic) {
    const double saved = param;
    param = saved + h;
    const double up = loss_at();
    param = saved - h;
    const double down = loss_at();
    param = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double denom = std::max({std::fabs(analytic), std::fabs(numeric), 1.0});
    max_err = std::max(max_err, std::fabs(analytic - numeric) / denom);
  };
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    for (std::size_t k = 0; k < probe.weights_[l].size(); ++k)
      check_param(probe.weights_[l][k], wgrad[l][k]);
    for (std::size_t k = 0; k < probe.biases_[l].size(); ++k)
      check_param(probe.biases_[l][k], bgrad[l][k]);
  }
  return max_err;
}

void MlpNetwork::save(std::ostream& out) const {
  out << "MLP v1 " << sizes_.size();
  for (int s : sizes_) out << ' ' << s;
  out << '\n';
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const std::size_t fan_in = static_cast<std::size_t>(sizes_[l]);
    const std::size_t fan_out = static_cast<std::size_t>(sizes_[l + 1]);
    for (std::size_t o = 0; o < fan_out; ++o) {
      for (std::size_t i = 0; i < fan_in; ++i) {
        if (i) out << ' ';
        out << dtos(weights_[l][o * fan_in + i]);
      }
      out << '\n';
    }
    for (std::size_t o = 0; o < fan_out; ++o) {
      if (o) out << ' ';
      out << dtos(biases_[l][o]);
    }
    out << '\n';
  }
}

std::string MlpNetwork::save_string() const {
  std::ostringstream ss;
  save(ss);
  return ss.str();
}

namespace {

// Whitespace-delimited token reader that remembers where each token started.
struct TokenReader {
  std::istream& in;
  std::size_t offset = 0;

  bool next(std::string& tok) {
    tok.clear();
    int c = in.get();
    while (c != EOF && (c == ' ' || c == '\n' || c == '\t' || c == '\r')) {
      ++offset;
      c = in.get();
    }
    if (c == EOF) return false;
    while (c != EOF && c != ' ' && c != '\n' && c != '\t' && c != '\r') {
      tok.push_back(static_cast<char>(c));
      c = in.get();
    }
    const std::size_t start = offset;
    offset += tok.size();
    if (c != EOF) in.unget();
    token_start = start;
    return true;
  }
  std::size_t token_start = 0;
};

}  // namespace

MlpNetwork MlpNetwork::load(std::istream& in) {
  TokenReader rd{in};
  std::string tok;
  auto need = [&](const char* what) {
    if (!rd.next(tok))
      throw CheckpointError(std::string("unexpected end of checkpoint, expected ") + what,
                            rd.offset);
  };
  need("magic");
  if (tok != "MLP") throw CheckpointError("bad magic, expected MLP", rd.token_start);
  need("version");
  if (tok != "v1") throw CheckpointError("unsupported version", rd.token_start);
  need("layer count");
  auto count = parse_int(tok);
  if (!count || *count < 2 || *count > 64)
    throw CheckpointError("bad layer count", rd.token_start);
  std::vector<int> sizes;
  for (long long i = 0; i < *count; ++i) {
    need("layer size");
    auto s = parse_int(tok);
    if (!s || *s < 1 || *s > 1000000)
      throw CheckpointError("bad layer size", rd.token_start);
    sizes.push_back(static_cast<int>(*s));
  }
  MlpNetwork net = MlpNetwork::zeros(sizes);
  auto read_param = [&](double& slot) {
    need("parameter");
    auto v = parse_double(tok);
    if (!v) throw CheckpointError("bad parameter value", rd.token_start);
    slot = *v;
  };
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    for (double& w : net.weights_[l]) read_param(w);
    for (double& b : net.biases_[l]) read_param(b);
  }
  if (rd.next(tok))
    throw CheckpointError("trailing data after parameters", rd.token_start);
  return net;
}

MlpNetwork MlpNetwork::load_string(const std::string& text) {
  std::istringstream ss(text);
  return load(ss);
}

bool MlpNetwork::same_parameters(const MlpNetwork& other) const {
  return sizes_ == other.sizes_ && weights_ == other.weights_ &&
         biases_ == other.biases_;
}

}  // namespace drlb
