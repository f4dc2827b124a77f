#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace drlb {

struct TrainConfig {
  double learning_rate = 0.001;
  double momentum = 0.95;
  int batch_size = 32;
};

struct CheckpointError : std::runtime_error {
  CheckpointError(const std::string& msg, std::size_t offset_)
      : std::runtime_error(msg + " (offset " + std::to_string(offset_) + ")"),
        offset(offset_) {}
  std::size_t offset;
};

// Fully connected network with rectified-linear hidden layers and a linear
// output, trained by classical momentum SGD. Weights are stored row-major,
// one row per output unit.
class MlpNetwork {
 public:
  MlpNetwork() = default;

  // Glorot-uniform weights from the given seed, zero biases.
  MlpNetwork(std::vector<int> layer_sizes, std::uint64_t init_seed);

  static MlpNetwork zeros(std::vector<int> layer_sizes);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }

  std::vector<double> forward(const std::vector<double>& input) const;

  // One momentum-SGD step on the mean squared error between targets[j] and
  // the output component output_indices[j] of sample j. Gradients flow only
  // through the selected components. Returns the pre-update batch loss.
  double sgd_step(const std::vector<std::vector<double>>& inputs,
                  const std::vector<double>& targets,
                  const std::vector<int>& output_indices,
                  const TrainConfig& cfg);

  // Max mismatch between analytic and central-difference gradients over all
  // parameters, for the single-sample loss (out[index] - target)^2. The
  // relative error is guarded at unit scale: |a-n| / max(|a|, |n|, 1).
  double gradient_check(const std::vector<double>& input, double target,
                        int output_index, double h = 1e-5) const;

  // Text checkpoint: `MLP v1 <n> <sizes...>` then, per layer, weights in
  // row-major order followed by biases, as round-trip exact decimals.
  // Momentum buffers are transient and not serialized.
  void save(std::ostream& out) const;
  std::string save_string() const;

  // Throws CheckpointError with the byte offset of the defect.
  static MlpNetwork load(std::istream& in);
  static MlpNetwork load_string(const std::string& text);

  // Flat views used by tests and the python bindings.
  const std::vector<std::vector<double>>& weights() const { return weights_; }
  const std::vector<std::vector<double>>& biases() const { return biases_; }
  std::vector<double>& weights_mut(int layer) { return weights_[static_cast<std::size_t>(layer)]; }
  std::vector<double>& biases_mut(int layer) { return biases_[static_cast<std::size_t>(layer)]; }

  bool same_parameters(const MlpNetwork& other) const;

 private:
  struct Workspace {
    std::vector<std::vector<double>> activations;  // per layer, post-ReLU
    std::vector<std::vector<double>> preacts;      // per layer
  };
  void forward_cached(const std::vector<double>& input, Workspace& ws) const;
  void accumulate_gradients(const Workspace& ws, double out_grad, int out_index,
                            std::vector<std::vector<double>>& wgrad,
                            std::vector<std::vector<double>>& bgrad) const;
  void check_topology() const;

  std::vector<int> sizes_;
  std::vector<std::vector<double>> weights_;       // [layer][out*in + in_idx]
  std::vector<std::vector<double>> biases_;        // [layer][out]
  std::vector<std::vector<double>> weight_momentum_;
  std::vector<std::vector<double>> bias_momentum_;
};

}  // namespace drlb
