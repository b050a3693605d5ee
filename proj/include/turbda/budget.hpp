#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "turbda/errors.hpp"

namespace turbda {

struct BudgetSpec {
    std::vector<long long> input_dims{256, 256};  // pixels per spatial axis
    std::vector<long long> patch_dims{4, 4};
    double epochs = 1.0;
    double params = 1.0;
    double dataset_images = 1.0;

    int layers = 24;
    int heads = 8;
    long long embed_dim = 2048;
    double mlp_ratio = 4.0;

    void validate() const;
};

// tokens per image = prod(input_dims[i] / patch_dims[i])
long long tokens_per_image(const BudgetSpec& spec);

// total training FLOPs: 6 MACs per parameter per token, over epochs and images
double estimate_training_flops(const BudgetSpec& spec);

// transformer weight count, attention (4 d^2) plus MLP (2 r d^2) per layer;
// biases, norms and embeddings are ignored
double vit_param_count(int layers, long long embed_dim, double mlp_ratio);

// "1.208e9" style: 4 significant digits, bare power-of-ten exponent
std::string format_sig(double x, int digits = 4);

}  // namespace turbda
