#include "cfof/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace cfof {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

bool parse_real(const std::string& cell, float& out) {
    const char* s = cell.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s) return false;
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    if (*end != '\0') return false;
    out = static_cast<float>(v);
    return true;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) fail("binary dataset: truncated header");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t read_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) fail("binary dataset: truncated header");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

} // namespace

void Dataset::validate() const {
    if (n < 1 || d < 1) fail("dataset: n and d must be >= 1");
    if (values.size() != n * d) fail("dataset: value buffer size mismatch");
    for (std::size_t c = 0; c < d; ++c) {
        const float* col = column(c);
        for (std::size_t r = 0; r < n; ++r) {
            if (!std::isfinite(col[r]))
                fail("dataset: non-finite value at row " + std::to_string(r) +
                     ", col " + std::to_string(c));
        }
    }
    if (!labels.empty()) {
        if (labels.size() != n) fail("dataset: label count != n");
        for (auto l : labels)
            if (l > 1) fail("dataset: labels must be 0 or 1");
    }
}

Dataset make_dataset(std::size_t n, std::size_t d, std::string name) {
    Dataset ds;
    ds.n = n;
    ds.d = d;
    ds.values.assign(n * d, 0.0f);
    ds.name = std::move(name);
    return ds;
}

Dataset load_csv(const std::string& path, bool has_header,
                 const std::optional<std::string>& label_column) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path);

    std::string line;
    std::vector<std::string> header;
    if (has_header) {
        if (!std::getline(in, line)) fail(path + ": empty file");
        header = split_line(line);
    }

    // Rows are parsed row-major and transposed into column-major storage below.
    std::vector<std::vector<float>> rows;
    std::vector<std::uint8_t> labels;
    std::size_t arity = 0;
    long label_idx = -1;
    std::size_t lineno = has_header ? 1 : 0;

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (arity == 0) {
            arity = cells.size();
            if (label_column) {
                // header name first, then numeric index
                for (std::size_t i = 0; i < header.size(); ++i)
                    if (header[i] == *label_column) label_idx = static_cast<long>(i);
                if (label_idx < 0) {
                    try {
                        label_idx = std::stol(*label_column);
                    } catch (...) {
                        fail(path + ": unknown label column '" + *label_column + "'");
                    }
                }
                if (label_idx < 0 || label_idx >= static_cast<long>(arity))
                    fail(path + ": label column index out of range");
            }
        } else if (cells.size() != arity) {
            fail(path + ": ragged row at line " + std::to_string(lineno) + " (got " +
                 std::to_string(cells.size()) + " cells, expected " + std::to_string(arity) + ")");
        }
        std::vector<float> row;
        row.reserve(arity);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            float v;
            if (!parse_real(cells[i], v))
                fail(path + ": parse error at line " + std::to_string(lineno) + ", column " +
                     std::to_string(i + 1) + " ('" + cells[i] + "')");
            if (static_cast<long>(i) == label_idx) {
                if (v != 0.0f && v != 1.0f)
                    fail(path + ": label at line " + std::to_string(lineno) + " is not 0/1");
                labels.push_back(static_cast<std::uint8_t>(v));
            } else {
                row.push_back(v);
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(path + ": no data rows");

    Dataset ds = make_dataset(rows.size(), rows.front().size(), path);
    for (std::size_t r = 0; r < ds.n; ++r)
        for (std::size_t c = 0; c < ds.d; ++c) ds.at(r, c) = rows[r][c];
    if (label_idx >= 0) ds.labels = std::move(labels);
    ds.validate();
    return ds;
}

void save_csv(const Dataset& ds, const std::string& path, bool write_header,
              const std::string& label_path) {
    std::ofstream out(path);
    if (!out) fail("cannot write " + path);
    char buf[64];
    if (write_header) {
        for (std::size_t c = 0; c < ds.d; ++c) {
            if (c) out << ',';
            out << 'a' << c;
        }
        out << '\n';
    }
    for (std::size_t r = 0; r < ds.n; ++r) {
        for (std::size_t c = 0; c < ds.d; ++c) {
            // %.9g is enough digits for exact f32 round trip
            std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(ds.at(r, c)));
            if (c) out << ',';
            out << buf;
        }
        out << '\n';
    }
    if (!out) fail("write failure on " + path);
    if (!label_path.empty() && ds.has_labels()) save_labels(ds.labels, label_path);
}

void save_labels(const std::vector<std::uint8_t>& labels, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail("cannot write " + path);
    for (auto l : labels) out << static_cast<int>(l) << '\n';
    if (!out) fail("write failure on " + path);
}

std::vector<std::uint8_t> load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path);
    std::vector<std::uint8_t> labels;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line == "0")
            labels.push_back(0);
        else if (line == "1")
            labels.push_back(1);
        else
            fail(path + ": bad label '" + line + "'");
    }
    return labels;
}

static const char kMagic[4] = {'C', 'F', 'O', 'F'};

void save_binary(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("cannot write " + path);
    out.write(kMagic, 4);
    write_u32(out, 1u);
    write_u64(out, ds.n);
    write_u64(out, ds.d);
    static_assert(sizeof(float) == 4);
    out.write(reinterpret_cast<const char*>(ds.values.data()),
              static_cast<std::streamsize>(ds.values.size() * 4));
    const std::uint8_t has = ds.has_labels() ? 1 : 0;
    out.write(reinterpret_cast<const char*>(&has), 1);
    if (has)
        out.write(reinterpret_cast<const char*>(ds.labels.data()),
                  static_cast<std::streamsize>(ds.n));
    if (!out) fail("write failure on " + path);
}

Dataset load_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) fail(path + ": bad magic bytes");
    const std::uint32_t version = read_u32(in);
    if (version != 1) fail(path + ": unsupported version " + std::to_string(version));
    const std::uint64_t n = read_u64(in);
    const std::uint64_t d = read_u64(in);
    if (n < 1 || d < 1) fail(path + ": empty dataset");
    Dataset ds = make_dataset(n, d, path);
    in.read(reinterpret_cast<char*>(ds.values.data()),
            static_cast<std::streamsize>(n * d * 4));
    if (static_cast<std::uint64_t>(in.gcount()) != n * d * 4)
        fail(path + ": truncated payload (expected " + std::to_string(n * d) + " floats)");
    std::uint8_t has = 0;
    in.read(reinterpret_cast<char*>(&has), 1);
    if (!in) fail(path + ": truncated label flag");
    if (has == 1) {
        ds.labels.resize(n);
        in.read(reinterpret_cast<char*>(ds.labels.data()), static_cast<std::streamsize>(n));
        if (static_cast<std::uint64_t>(in.gcount()) != n) fail(path + ": truncated labels");
    } else if (has != 0) {
        fail(path + ": bad label flag");
    }
    ds.validate();
    return ds;
}

Dataset normalize(const Dataset& ds) {
    if (ds.n < 2) fail("normalize: need at least 2 points");
    std::vector<std::size_t> keep;
    std::vector<double> means, sds;
    for (std::size_t c = 0; c < ds.d; ++c) {
        const float* col = ds.column(c);
        double sum = 0.0;
        for (std::size_t r = 0; r < ds.n; ++r) sum += col[r];
        const double mean = sum / static_cast<double>(ds.n);
        double ss = 0.0;
        for (std::size_t r = 0; r < ds.n; ++r) {
            const double dv = col[r] - mean;
            ss += dv * dv;
        }
        const double var = ss / static_cast<double>(ds.n); // population variance
        if (var > 0.0) {
            keep.push_back(c);
            means.push_back(mean);
            sds.push_back(std::sqrt(var));
        }
    }
    if (keep.empty()) fail("normalize: all attributes have null variance");
    if (keep.size() != ds.d)
        std::cerr << "normalize: dropped " << (ds.d - keep.size())
                  << " null-variance attribute(s)\n";

    Dataset out = make_dataset(ds.n, keep.size(), ds.name);
    out.labels = ds.labels;
    for (std::size_t k = 0; k < keep.size(); ++k) {
        const float* src = ds.column(keep[k]);
        float* dst = out.values.data() + k * out.n;
        for (std::size_t r = 0; r < ds.n; ++r)
            dst[r] = static_cast<float>((src[r] - means[k]) / sds[k]);
    }
    return out;
}

Dataset shuffle_attributes(const Dataset& ds, std::uint64_t seed) {
    Dataset out = ds;
    CounterRng rng(seed);
    for (std::size_t c = 0; c < ds.d; ++c) {
        auto perm = random_permutation(ds.n, rng.substream(c));
        const float* src = ds.column(c);
        float* dst = out.values.data() + c * ds.n;
        for (std::size_t r = 0; r < ds.n; ++r) dst[r] = src[perm[r]];
    }
    return out;
}

Dataset randomize_rows(const Dataset& ds, std::uint64_t seed) {
    Dataset out = make_dataset(ds.n, ds.d, ds.name);
    auto perm = random_permutation(ds.n, CounterRng(seed));
    for (std::size_t c = 0; c < ds.d; ++c) {
        const float* src = ds.column(c);
        float* dst = out.values.data() + c * ds.n;
        for (std::size_t r = 0; r < ds.n; ++r) dst[r] = src[perm[r]];
    }
    if (ds.has_labels()) {
        out.labels.resize(ds.n);
        for (std::size_t r = 0; r < ds.n; ++r) out.labels[r] = ds.labels[perm[r]];
    }
    return out;
}

std::vector<std::size_t> random_permutation(std::size_t n, const CounterRng& rng) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.bits(i) % i);
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

} // namespace cfof
