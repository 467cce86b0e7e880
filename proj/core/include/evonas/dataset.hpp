#pragma once

#include <cstdint>
#include <string>

#include "evonas/tinynet.hpp"

namespace evonas {

/// Classification data with fixed train/val/test splits. Inputs are stored
/// rank-4 (N, C, H, W); dense-only networks flatten internally.
struct Dataset {
    tinynet::LabeledData train;
    tinynet::LabeledData val;
    tinynet::LabeledData test;
    tinynet::InputShape input_shape;
    int n_classes = 2;
};

enum class SyntheticKind { blobs, rings, bars };

const char* to_string(SyntheticKind k);
SyntheticKind synthetic_kind_from_string(const std::string& s);

/// Deterministic two-class generators, stratified so class counts differ by
/// at most one overall and inside every split (50/25/25).
///   blobs — two well-separated Gaussians on the flattened input; linearly
///           separable in practice, so dense nets suffice.
///   rings — circle vs square outlines with jittered center/radius plus
///           pixel noise; built so spatial features (convs) pay off.
///   bars  — one bright horizontal vs vertical bar at a random offset.
/// Throws std::invalid_argument for n_samples < 10 or a degenerate shape.
Dataset make_synthetic_dataset(SyntheticKind kind, int n_samples, tinynet::InputShape input_shape,
                               std::uint64_t seed);

/// Reads an IDX image/label file pair (the MNIST container format:
/// big-endian magic 0x00000803 for images, 0x00000801 for labels). Pixels
/// scale to [0,1]. Keeps the first `limit` samples (limit <= 0 keeps all),
/// then splits by index: the trailing val_fraction becomes the validation
/// split; `test` aliases `val`. Errors name the failure distinctly:
/// "bad magic", "truncated", or "count mismatch".
Dataset load_idx(const std::string& images_path, const std::string& labels_path, int limit, double val_fraction);

}  // namespace evonas
