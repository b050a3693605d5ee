#include "turbda/budget.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace turbda {

void BudgetSpec::validate() const {
    if (input_dims.empty() || input_dims.size() != patch_dims.size())
        throw ConfigError("budget: input/patch dims must align");
    for (size_t i = 0; i < input_dims.size(); ++i) {
        if (input_dims[i] <= 0 || patch_dims[i] <= 0)
            throw ConfigError("budget: dims must be positive");
        if (input_dims[i] % patch_dims[i] != 0)
            throw ConfigError("budget: input dim " + std::to_string(input_dims[i]) +
                              " not divisible by patch " +
                              std::to_string(patch_dims[i]));
    }
    if (!(epochs > 0.0) || !(params > 0.0) || !(dataset_images > 0.0))
        throw ConfigError("budget: epochs, params, images must be positive");
    if (layers <= 0 || heads <= 0 || embed_dim <= 0 || !(mlp_ratio > 0.0))
        throw ConfigError("budget: architecture fields must be positive");
}

long long tokens_per_image(const BudgetSpec& spec) {
    spec.validate();
    long long tokens = 1;
    for (size_t i = 0; i < spec.input_dims.size(); ++i)
        tokens *= spec.input_dims[i] / spec.patch_dims[i];
    return tokens;
}

double estimate_training_flops(const BudgetSpec& spec) {
    return 6.0 * double(tokens_per_image(spec)) * spec.epochs * spec.params *
           spec.dataset_images;
}

double vit_param_count(int layers, long long embed_dim, double mlp_ratio) {
    if (layers <= 0 || embed_dim <= 0 || !(mlp_ratio > 0.0))
        throw ConfigError("vit_param_count: positive inputs required");
    const double d2 = double(embed_dim) * double(embed_dim);
    return double(layers) * (4.0 + 2.0 * mlp_ratio) * d2;
}

std::string format_sig(double x, int digits) {
    if (digits < 1) digits = 1;
    if (x == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
    // turn "1.208e+09" into "1.208e9"
    std::string s(buf);
    const auto e = s.find('e');
    std::string mant = s.substr(0, e);
    int expo = std::atoi(s.c_str() + e + 1);
    return mant + "e" + std::to_string(expo);
}

}  // namespace turbda
