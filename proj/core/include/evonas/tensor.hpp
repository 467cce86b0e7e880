#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace evonas {

/// Dense row-major tensor of doubles. Shape is dynamic; most of the trainer
/// uses rank-2 (N, features) or rank-4 (N, channels, H, W).
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> v;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> s);

    static Tensor zeros(std::vector<std::size_t> s) { return Tensor(std::move(s)); }

    std::size_t size() const { return v.size(); }
    std::size_t dim(std::size_t i) const { return shape[i]; }

    double& at2(std::size_t i, std::size_t j) { return v[i * shape[1] + j]; }
    double at2(std::size_t i, std::size_t j) const { return v[i * shape[1] + j]; }

    double& at4(std::size_t n, std::size_t c, std::size_t h, std::size_t w) {
        return v[((n * shape[1] + c) * shape[2] + h) * shape[3] + w];
    }
    double at4(std::size_t n, std::size_t c, std::size_t h, std::size_t w) const {
        return v[((n * shape[1] + c) * shape[2] + h) * shape[3] + w];
    }

    void fill(double x) { std::fill(v.begin(), v.end(), x); }

    bool same_shape(const Tensor& other) const { return shape == other.shape; }
};

std::size_t shape_product(const std::vector<std::size_t>& shape);

void to_json(nlohmann::json& j, const Tensor& t);
void from_json(const nlohmann::json& j, Tensor& t);

}  // namespace evonas
