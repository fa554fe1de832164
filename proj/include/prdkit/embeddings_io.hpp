#pragma once

#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "prdkit/common.hpp"
#include "prdkit/sample_set.hpp"

namespace prdkit {

enum class EmbeddingFormat { csv, npy, raw };

/// .csv and .npy by extension; anything else is packed float32 with a JSON
/// sidecar `<path>.json` declaring {"n":…,"d":…}.
inline EmbeddingFormat infer_embedding_format(const std::string& path) {
    auto ends_with = [&](const char* suffix) {
        const std::size_t n = std::strlen(suffix);
        return path.size() >= n && path.compare(path.size() - n, n, suffix) == 0;
    };
    if (ends_with(".csv")) return EmbeddingFormat::csv;
    if (ends_with(".npy")) return EmbeddingFormat::npy;
    return EmbeddingFormat::raw;
}

namespace detail {

inline bool parse_double_token(const std::string& token, double& out) {
    if (token.empty()) return false;
    char* end = nullptr;
    out = std::strtod(token.c_str(), &end);
    return end == token.c_str() + token.size();
}

inline SampleSet read_csv_embeddings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open embeddings file '" + path + "'");
    SampleSet s;
    s.label = path;
    std::string line;
    std::size_t lineno = 0, cols = 0;
    bool first_data_row = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::stringstream ss(line);
        std::string token;
        std::vector<double> row;
        bool bad = false;
        while (std::getline(ss, token, ',')) {
            double v;
            if (!parse_double_token(token, v)) {
                bad = true;
                break;
            }
            row.push_back(v);
        }
        if (bad) {
            if (lineno == 1) continue;  // non-numeric header
            throw ParseError(path + ": row " + std::to_string(lineno) + ": non-numeric entry '" +
                             token + "'");
        }
        if (first_data_row) {
            cols = row.size();
            first_data_row = false;
        } else if (row.size() != cols) {
            throw ParseError(path + ": row " + std::to_string(lineno) + ": expected " +
                             std::to_string(cols) + " columns, got " + std::to_string(row.size()));
        }
        for (double v : row) {
            if (!std::isfinite(v))
                throw ParseError(path + ": row " + std::to_string(lineno) + ": non-finite value");
            s.points.data.push_back(v);
        }
        ++s.points.rows;
    }
    s.points.cols = cols;
    if (s.points.rows == 0 || cols == 0) throw ParseError(path + ": no data rows");
    return s;
}

inline void write_csv_embeddings(const SampleSet& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    char buf[40];
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto row = s.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[j]);
            out << (j ? "," : "") << buf;
        }
        out << '\n';
    }
}

inline SampleSet read_npy_embeddings(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open embeddings file '" + path + "'");
    char magic[6];
    if (!in.read(magic, 6) || std::memcmp(magic, "\x93NUMPY", 6) != 0)
        throw ParseError(path + ": not an NPY file (bad magic at offset 0)");
    unsigned char version[2];
    in.read(reinterpret_cast<char*>(version), 2);
    std::uint32_t header_len = 0;
    if (version[0] == 1) {
        unsigned char b[2];
        in.read(reinterpret_cast<char*>(b), 2);
        header_len = b[0] | (static_cast<std::uint32_t>(b[1]) << 8);
    } else if (version[0] == 2) {
        unsigned char b[4];
        in.read(reinterpret_cast<char*>(b), 4);
        header_len = b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    } else {
        throw ParseError(path + ": unsupported NPY version " + std::to_string(version[0]));
    }
    std::string header(header_len, '\0');
    if (!in.read(header.data(), header_len)) throw ParseError(path + ": truncated NPY header");

    auto contains = [&](const char* what) { return header.find(what) != std::string::npos; };
    std::size_t item_size = 0;
    if (contains("'<f8'") || contains("\"<f8\""))
        item_size = 8;
    else if (contains("'<f4'") || contains("\"<f4\""))
        item_size = 4;
    else
        throw ParseError(path + ": unsupported dtype (need little-endian '<f4' or '<f8')");
    if (!contains("'fortran_order': False") && !contains("\"fortran_order\": false"))
        throw ParseError(path + ": only C-order (fortran_order=False) arrays are supported");
    const std::size_t open = header.find('(');
    const std::size_t close = header.find(')', open);
    if (open == std::string::npos || close == std::string::npos)
        throw ParseError(path + ": cannot locate shape tuple in NPY header");
    std::string shape = header.substr(open + 1, close - open - 1);
    std::size_t n = 0, d = 0;
    {
        std::stringstream ss(shape);
        std::string token;
        std::vector<std::size_t> dims;
        while (std::getline(ss, token, ',')) {
            std::string trimmed;
            for (char c : token)
                if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
            if (trimmed.empty()) continue;
            dims.push_back(static_cast<std::size_t>(std::stoull(trimmed)));
        }
        if (dims.size() != 2)
            throw ParseError(path + ": expected a 2-D array, shape has " +
                             std::to_string(dims.size()) + " dimensions");
        n = dims[0];
        d = dims[1];
    }
    SampleSet s;
    s.label = path;
    s.points = Matrix(n, d);
    const std::size_t count = n * d;
    if (item_size == 8) {
        if (!in.read(reinterpret_cast<char*>(s.points.data.data()),
                     static_cast<std::streamsize>(count * 8)))
            throw ParseError(path + ": payload shorter than declared shape (" + std::to_string(n) +
                             " x " + std::to_string(d) + ")");
    } else {
        std::vector<float> tmp(count);
        if (!in.read(reinterpret_cast<char*>(tmp.data()), static_cast<std::streamsize>(count * 4)))
            throw ParseError(path + ": payload shorter than declared shape (" + std::to_string(n) +
                             " x " + std::to_string(d) + ")");
        for (std::size_t i = 0; i < count; ++i) s.points.data[i] = static_cast<double>(tmp[i]);
    }
    for (std::size_t i = 0; i < count; ++i)
        if (!std::isfinite(s.points.data[i]))
            throw ParseError(path + ": non-finite value at row " + std::to_string(i / d) +
                             ", column " + std::to_string(i % d));
    return s;
}

inline void write_npy_embeddings(const SampleSet& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    std::string dict = "{'descr': '<f8', 'fortran_order': False, 'shape': (" +
                       std::to_string(s.size()) + ", " + std::to_string(s.dim()) + "), }";
    const std::size_t unpadded = 6 + 2 + 2 + dict.size() + 1;
    const std::size_t padding = (64 - unpadded % 64) % 64;
    dict.append(padding, ' ');
    dict.push_back('\n');
    out.write("\x93NUMPY", 6);
    const unsigned char version[2] = {1, 0};
    out.write(reinterpret_cast<const char*>(version), 2);
    const std::uint16_t len = static_cast<std::uint16_t>(dict.size());
    const unsigned char lenb[2] = {static_cast<unsigned char>(len & 0xff),
                                   static_cast<unsigned char>(len >> 8)};
    out.write(reinterpret_cast<const char*>(lenb), 2);
    out << dict;
    out.write(reinterpret_cast<const char*>(s.points.data.data()),
              static_cast<std::streamsize>(s.points.data.size() * 8));
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

inline SampleSet read_raw_embeddings(const std::string& path) {
    std::ifstream side(path + ".json");
    if (!side) throw ParseError("raw embeddings '" + path + "': missing sidecar '" + path + ".json'");
    nlohmann::json j;
    try {
        side >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ".json: " + e.what());
    }
    if (!j.contains("n") || !j.contains("d"))
        throw ParseError(path + ".json: sidecar must declare \"n\" and \"d\"");
    const std::size_t n = j["n"].get<std::size_t>();
    const std::size_t d = j["d"].get<std::size_t>();
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw ParseError("cannot open embeddings file '" + path + "'");
    const std::size_t bytes = static_cast<std::size_t>(in.tellg());
    if (bytes != n * d * 4)
        throw ParseError(path + ": file holds " + std::to_string(bytes) + " bytes but sidecar declares " +
                         std::to_string(n) + " x " + std::to_string(d) + " float32 = " +
                         std::to_string(n * d * 4) + " bytes");
    in.seekg(0);
    std::vector<float> tmp(n * d);
    in.read(reinterpret_cast<char*>(tmp.data()), static_cast<std::streamsize>(bytes));
    SampleSet s;
    s.label = path;
    s.points = Matrix(n, d);
    for (std::size_t i = 0; i < tmp.size(); ++i) {
        if (!std::isfinite(tmp[i]))
            throw ParseError(path + ": non-finite value at element offset " + std::to_string(i));
        s.points.data[i] = static_cast<double>(tmp[i]);
    }
    return s;
}

inline void write_raw_embeddings(const SampleSet& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    std::vector<float> tmp(s.points.data.size());
    for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] = static_cast<float>(s.points.data[i]);
    out.write(reinterpret_cast<const char*>(tmp.data()), static_cast<std::streamsize>(tmp.size() * 4));
    std::ofstream side(path + ".json");
    side << nlohmann::json{{"n", s.size()}, {"d", s.dim()}}.dump() << '\n';
    if (!out || !side) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace detail

inline SampleSet read_embeddings(const std::string& path,
                                 std::optional<EmbeddingFormat> format = std::nullopt) {
    const EmbeddingFormat f = format.value_or(infer_embedding_format(path));
    SampleSet s;
    switch (f) {
        case EmbeddingFormat::csv: s = detail::read_csv_embeddings(path); break;
        case EmbeddingFormat::npy: s = detail::read_npy_embeddings(path); break;
        case EmbeddingFormat::raw: s = detail::read_raw_embeddings(path); break;
    }
    validate(s);
    return s;
}

inline void write_embeddings(const SampleSet& s, const std::string& path,
                             std::optional<EmbeddingFormat> format = std::nullopt) {
    validate(s);
    switch (format.value_or(infer_embedding_format(path))) {
        case EmbeddingFormat::csv: detail::write_csv_embeddings(s, path); break;
        case EmbeddingFormat::npy: detail::write_npy_embeddings(s, path); break;
        case EmbeddingFormat::raw: detail::write_raw_embeddings(s, path); break;
    }
}

}  // namespace prdkit
