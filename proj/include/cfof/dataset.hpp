#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfof/rng.hpp"

namespace cfof {

// Dense n x d matrix of real-valued points, stored column-major so distance
// kernels stream one attribute at a time. Immutable after construction;
// transforms return new datasets.
struct Dataset {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<float> values;          // column-major, values[col * n + row]
    std::vector<std::uint8_t> labels;   // empty, or n entries in {0,1}
    std::string name;

    float at(std::size_t row, std::size_t col) const { return values[col * n + row]; }
    float& at(std::size_t row, std::size_t col) { return values[col * n + row]; }
    const float* column(std::size_t col) const { return values.data() + col * n; }
    bool has_labels() const { return !labels.empty(); }

    // Throws if any invariant is broken (empty dims, non-finite cells,
    // label arity/values).
    void validate() const;
};

Dataset make_dataset(std::size_t n, std::size_t d, std::string name = {});

// CSV: comma separated, decimal-point reals, optional single header line.
// label_column selects a column by header name or 0-based index; it is
// removed from the value matrix and parsed as binary labels.
Dataset load_csv(const std::string& path, bool has_header = false,
                 const std::optional<std::string>& label_column = std::nullopt);
void save_csv(const Dataset& ds, const std::string& path, bool write_header = true,
              const std::string& label_path = {});

// Binary layout: magic "CFOF", u32 version=1, u64 n, u64 d,
// n*d little-endian IEEE-754 f32 in column-major order, u8 has_labels,
// then n label bytes when present. Round trip is bit exact.
Dataset load_binary(const std::string& path);
void save_binary(const Dataset& ds, const std::string& path);

// Writes labels (one 0/1 per line) next to a dataset file.
void save_labels(const std::vector<std::uint8_t>& labels, const std::string& path);
std::vector<std::uint8_t> load_labels(const std::string& path);

// Mean-centers every attribute and divides by its population standard
// deviation. Attributes with null variance are dropped (a notice is printed
// to stderr); throws if nothing survives.
Dataset normalize(const Dataset& ds);

// Independently permutes the values within every attribute. Marginal moments
// are preserved; relationships between attributes are destroyed.
Dataset shuffle_attributes(const Dataset& ds, std::uint64_t seed);

// Permutes whole rows; labels follow their rows.
Dataset randomize_rows(const Dataset& ds, std::uint64_t seed);

} // namespace cfof
