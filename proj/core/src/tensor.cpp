#include "evonas/tensor.hpp"

#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace evonas {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

Tensor::Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
    for (std::size_t d : shape) {
        if (d == 0) throw std::invalid_argument("tensor dimensions must be positive");
    }
    v.assign(shape_product(shape), 0.0);
}

void to_json(nlohmann::json& j, const Tensor& t) {
    j = nlohmann::json{{"shape", t.shape}, {"values", t.v}};
}

void from_json(const nlohmann::json& j, Tensor& t) {
    j.at("shape").get_to(t.shape);
    j.at("values").get_to(t.v);
    if (t.v.size() != shape_product(t.shape)) {
        throw std::invalid_argument("tensor value count does not match shape");
    }
}

}  // namespace evonas
