#include "evonas/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "evonas/rng.hpp"

namespace evonas {

const char* to_string(SyntheticKind k) {
    switch (k) {
        case SyntheticKind::blobs: return "blobs";
        case SyntheticKind::rings: return "rings";
        case SyntheticKind::bars: return "bars";
    }
    return "?";
}

SyntheticKind synthetic_kind_from_string(const std::string& s) {
    if (s == "blobs") return SyntheticKind::blobs;
    if (s == "rings") return SyntheticKind::rings;
    if (s == "bars") return SyntheticKind::bars;
    throw std::invalid_argument("unknown synthetic dataset kind: " + s);
}

namespace {

void paint_blob(double* px, std::size_t flat, int label, Rng& rng) {
    const double mu = (label == 0 ? -3.0 : 3.0) / std::sqrt(static_cast<double>(flat));
    std::normal_distribution<double> d(mu, 1.0);
    for (std::size_t i = 0; i < flat; ++i) px[i] = d(rng);
}

void paint_ring(double* px, const tinynet::InputShape& shape, int label, Rng& rng) {
    const auto h = static_cast<double>(shape.height), w = static_cast<double>(shape.width);
    std::uniform_real_distribution<double> center(0.35, 0.65);
    std::uniform_real_distribution<double> radius(0.28, 0.42);
    std::normal_distribution<double> noise(0.0, 0.15);
    const double cy = center(rng) * (h - 1.0);
    const double cx = center(rng) * (w - 1.0);
    const double r = radius(rng) * std::min(h, w);
    for (std::size_t c = 0; c < shape.channels; ++c) {
        for (std::size_t y = 0; y < shape.height; ++y) {
            for (std::size_t x = 0; x < shape.width; ++x) {
                const double dy = static_cast<double>(y) - cy;
                const double dx = static_cast<double>(x) - cx;
                // Class 0 outlines a circle (L2 ring), class 1 a square (L-inf ring).
                const double dist = label == 0 ? std::hypot(dy, dx) : std::max(std::abs(dy), std::abs(dx));
                const double t = (dist - r) / 0.7;
                px[(c * shape.height + y) * shape.width + x] = std::exp(-t * t) + noise(rng);
            }
        }
    }
}

void paint_bar(double* px, const tinynet::InputShape& shape, int label, Rng& rng) {
    std::normal_distribution<double> noise(0.0, 0.15);
    const std::size_t thickness = std::max<std::size_t>(1, std::min(shape.height, shape.width) / 6);
    const std::size_t span = (label == 0 ? shape.height : shape.width) - thickness;
    std::uniform_int_distribution<std::size_t> offset(0, span);
    const std::size_t o = offset(rng);
    for (std::size_t c = 0; c < shape.channels; ++c) {
        for (std::size_t y = 0; y < shape.height; ++y) {
            for (std::size_t x = 0; x < shape.width; ++x) {
                const std::size_t along = label == 0 ? y : x;
                const double lit = (along >= o && along < o + thickness) ? 1.0 : 0.0;
                px[(c * shape.height + y) * shape.width + x] = lit + noise(rng);
            }
        }
    }
}

tinynet::LabeledData gather_split(const Tensor& all, const std::vector<int>& labels, const std::vector<int>& idx) {
    tinynet::LabeledData out;
    out.inputs = tinynet::gather_rows(all, idx);
    out.labels.reserve(idx.size());
    for (int i : idx) out.labels.push_back(labels[i]);
    return out;
}

}  // namespace

Dataset make_synthetic_dataset(SyntheticKind kind, int n_samples, tinynet::InputShape input_shape,
                               std::uint64_t seed) {
    if (n_samples < 10) throw std::invalid_argument("n_samples must be at least 10");
    if (input_shape.channels < 1 || input_shape.height < 1 || input_shape.width < 1) {
        throw std::invalid_argument("invalid input shape: all dims must be positive");
    }
    if (kind != SyntheticKind::blobs && (input_shape.height < 4 || input_shape.width < 4)) {
        throw std::invalid_argument("invalid input shape: image kinds need at least 4x4");
    }

    Rng rng = make_rng(seed, {stream::kDataset});
    const auto n = static_cast<std::size_t>(n_samples);
    Tensor all({n, input_shape.channels, input_shape.height, input_shape.width});
    std::vector<int> labels(n);
    const std::size_t flat = input_shape.flat();
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = static_cast<int>(i % 2);
        double* px = &all.v[i * flat];
        switch (kind) {
            case SyntheticKind::blobs: paint_blob(px, flat, labels[i], rng); break;
            case SyntheticKind::rings: paint_ring(px, input_shape, labels[i], rng); break;
            case SyntheticKind::bars: paint_bar(px, input_shape, labels[i], rng); break;
        }
    }

    // Stratified 50/25/25 split: quota is taken per class, so every split
    // stays balanced within one sample.
    std::vector<int> tr, va, te;
    for (int cls = 0; cls < 2; ++cls) {
        std::vector<int> mine;
        for (std::size_t i = 0; i < n; ++i) {
            if (labels[i] == cls) mine.push_back(static_cast<int>(i));
        }
        const std::size_t n_tr = mine.size() / 2;
        const std::size_t n_va = mine.size() / 4;
        tr.insert(tr.end(), mine.begin(), mine.begin() + static_cast<long>(n_tr));
        va.insert(va.end(), mine.begin() + static_cast<long>(n_tr), mine.begin() + static_cast<long>(n_tr + n_va));
        te.insert(te.end(), mine.begin() + static_cast<long>(n_tr + n_va), mine.end());
    }
    std::shuffle(tr.begin(), tr.end(), rng);
    std::shuffle(va.begin(), va.end(), rng);
    std::shuffle(te.begin(), te.end(), rng);

    Dataset out;
    out.input_shape = input_shape;
    out.n_classes = 2;
    out.train = gather_split(all, labels, tr);
    out.val = gather_split(all, labels, va);
    out.test = gather_split(all, labels, te);
    return out;
}

namespace {

std::uint32_t read_u32_be(std::ifstream& f, const std::string& path) {
    unsigned char buf[4];
    if (!f.read(reinterpret_cast<char*>(buf), 4)) throw std::runtime_error("truncated IDX file: " + path);
    return (std::uint32_t{buf[0]} << 24) | (std::uint32_t{buf[1]} << 16) | (std::uint32_t{buf[2]} << 8) |
           std::uint32_t{buf[3]};
}

}  // namespace

Dataset load_idx(const std::string& images_path, const std::string& labels_path, int limit, double val_fraction) {
    if (val_fraction < 0.0 || val_fraction >= 1.0) {
        throw std::invalid_argument("val_fraction must be in [0, 1)");
    }
    std::ifstream imgs(images_path, std::ios::binary);
    if (!imgs) throw std::runtime_error("cannot open images file: " + images_path);
    std::ifstream labs(labels_path, std::ios::binary);
    if (!labs) throw std::runtime_error("cannot open labels file: " + labels_path);

    const std::uint32_t img_magic = read_u32_be(imgs, images_path);
    if (img_magic != 0x00000803u) throw std::runtime_error("bad magic in images file: " + images_path);
    const std::uint32_t n_images = read_u32_be(imgs, images_path);
    const std::uint32_t rows = read_u32_be(imgs, images_path);
    const std::uint32_t cols = read_u32_be(imgs, images_path);

    const std::uint32_t lab_magic = read_u32_be(labs, labels_path);
    if (lab_magic != 0x00000801u) throw std::runtime_error("bad magic in labels file: " + labels_path);
    const std::uint32_t n_labels = read_u32_be(labs, labels_path);

    if (n_images != n_labels) {
        throw std::runtime_error("count mismatch: " + std::to_string(n_images) + " images vs " +
                                 std::to_string(n_labels) + " labels");
    }

    std::size_t n = n_images;
    if (limit > 0) n = std::min<std::size_t>(n, static_cast<std::size_t>(limit));
    const std::size_t px_per_image = std::size_t{rows} * cols;

    std::vector<unsigned char> img_bytes(n * px_per_image);
    if (!imgs.read(reinterpret_cast<char*>(img_bytes.data()), static_cast<long>(img_bytes.size()))) {
        throw std::runtime_error("truncated IDX file: " + images_path);
    }
    std::vector<unsigned char> lab_bytes(n);
    if (!labs.read(reinterpret_cast<char*>(lab_bytes.data()), static_cast<long>(lab_bytes.size()))) {
        throw std::runtime_error("truncated IDX file: " + labels_path);
    }

    Dataset out;
    out.input_shape = {1, rows, cols};
    int max_label = 1;
    for (unsigned char b : lab_bytes) max_label = std::max(max_label, static_cast<int>(b));
    out.n_classes = max_label + 1;

    const auto n_val = static_cast<std::size_t>(std::lround(static_cast<double>(n) * val_fraction));
    const std::size_t n_train = n - n_val;
    auto build = [&](std::size_t begin, std::size_t count) {
        if (count == 0) throw std::runtime_error("empty split loading " + images_path);
        tinynet::LabeledData d;
        d.inputs = Tensor({count, 1, rows, cols});
        for (std::size_t i = 0; i < count * px_per_image; ++i) {
            d.inputs.v[i] = static_cast<double>(img_bytes[begin * px_per_image + i]) / 255.0;
        }
        d.labels.reserve(count);
        for (std::size_t i = 0; i < count; ++i) d.labels.push_back(static_cast<int>(lab_bytes[begin + i]));
        return d;
    };
    out.train = build(0, n_train);
    out.val = n_val > 0 ? build(n_train, n_val) : out.train;
    out.test = out.val;
    return out;
}

}  // namespace evonas
