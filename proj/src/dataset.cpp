#include "compfeat/dataset.hpp"

#include "compfeat/error.hpp"
#include "compfeat/simd.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace compfeat {

namespace {

double std_normal_cdf(double g) { return 0.5 * std::erfc(-g / std::numbers::sqrt2); }

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_double(const std::string& s, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
}

} // namespace

std::vector<InputRecord> synth_records(const Skeleton& skeleton, std::size_t count,
                                       std::uint64_t seed, double locality) {
    if (locality < 0.0 || locality >= 1.0)
        throw ParameterError("synth: locality must be in [0, 1)");
    std::vector<InputRecord> out(count);
    const auto& spaces = skeleton.input_spaces();
    const double carry = locality;
    const double fresh = std::sqrt(1.0 - locality * locality);

    for (std::size_t r = 0; r < count; ++r) {
        RandomStream rng(seed, r);
        InputRecord rec;
        rec.coords.reserve(spaces.size());
        // Latent AR(1) Gaussian across the flattened scalar slots.
        double g = rng.normal();
        auto next_latent = [&]() {
            double v = g;
            g = carry * g + fresh * rng.normal();
            return v;
        };
        for (const auto& space : spaces) {
            switch (space.kind()) {
            case SpaceKind::binary:
                rec.coords.emplace_back(next_latent() >= 0.0 ? 1.0 : -1.0);
                break;
            case SpaceKind::circle: {
                double theta = 2.0 * std::numbers::pi * std_normal_cdf(next_latent());
                rec.coords.emplace_back(std::polar(1.0, theta));
                break;
            }
            case SpaceKind::categorical: {
                double u = std_normal_cdf(next_latent());
                auto c = static_cast<std::uint32_t>(u * space.extent());
                if (c >= space.extent()) c = space.extent() - 1;
                rec.coords.emplace_back(static_cast<std::uint32_t>(c + 1));
                break;
            }
            case SpaceKind::gaussian: {
                std::vector<double> v(space.extent());
                for (double& x : v) x = next_latent();
                rec.coords.emplace_back(std::move(v));
                break;
            }
            case SpaceKind::sphere_coord_pair:
            case SpaceKind::sphere_projection: {
                std::vector<double> v(space.extent());
                double norm2 = 0.0;
                for (double& x : v) {
                    x = next_latent();
                    norm2 += x * x;
                }
                if (norm2 == 0.0) {
                    v[0] = 1.0;
                } else {
                    double inv = 1.0 / std::sqrt(norm2);
                    for (double& x : v) x *= inv;
                }
                rec.coords.emplace_back(std::move(v));
                break;
            }
            }
        }
        out[r] = std::move(rec);
    }
    return out;
}

Dataset load_dataset_csv(const std::string& path, const Skeleton& skeleton) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    auto header = split_csv_line(line);

    std::size_t value_columns = 0;
    for (const auto& space : skeleton.input_spaces()) value_columns += space.value_columns();
    if (header.size() < value_columns)
        throw ParseError(path + ": header has " + std::to_string(header.size()) +
                         " columns, need at least " + std::to_string(value_columns));
    std::size_t label_dim = header.size() - value_columns;

    Dataset dataset;
    dataset.label_dim = label_dim;
    std::size_t line_no = 1;
    bool warned_norm = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw ParseError(path + " line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        InputRecord rec;
        std::size_t col = 0;
        for (const auto& space : skeleton.input_spaces()) {
            switch (space.kind()) {
            case SpaceKind::binary: {
                double v = parse_double(fields[col++], line_no);
                if (v != 1.0 && v != -1.0)
                    throw ParseError(path + " line " + std::to_string(line_no) +
                                     ": binary value must be +-1");
                rec.coords.emplace_back(v);
                break;
            }
            case SpaceKind::circle: {
                double theta = parse_double(fields[col++], line_no);
                rec.coords.emplace_back(std::polar(1.0, theta));
                break;
            }
            case SpaceKind::categorical: {
                double v = parse_double(fields[col++], line_no);
                auto c = static_cast<std::int64_t>(v);
                if (static_cast<double>(c) != v || c < 1 ||
                    c > static_cast<std::int64_t>(space.extent()))
                    throw ParseError(path + " line " + std::to_string(line_no) +
                                     ": category out of range");
                rec.coords.emplace_back(static_cast<std::uint32_t>(c));
                break;
            }
            case SpaceKind::gaussian: {
                std::vector<double> v(space.extent());
                for (double& x : v) x = parse_double(fields[col++], line_no);
                rec.coords.emplace_back(std::move(v));
                break;
            }
            case SpaceKind::sphere_coord_pair:
            case SpaceKind::sphere_projection: {
                std::vector<double> v(space.extent());
                for (double& x : v) x = parse_double(fields[col++], line_no);
                double norm = std::sqrt(simd::dot(v.data(), v.data(), v.size()));
                if (norm == 0.0)
                    throw ParseError(path + " line " + std::to_string(line_no) +
                                     ": zero sphere vector");
                if (std::abs(norm - 1.0) > 1e-6 && !warned_norm) {
                    std::cerr << "warning: " << path << " line " << line_no
                              << ": sphere row off unit norm by " << std::abs(norm - 1.0)
                              << ", renormalizing (further warnings suppressed)\n";
                    warned_norm = true;
                }
                double inv = 1.0 / norm;
                for (double& x : v) x *= inv;
                rec.coords.emplace_back(std::move(v));
                break;
            }
            }
        }
        for (std::size_t k = 0; k < label_dim; ++k)
            dataset.labels.push_back(parse_double(fields[col++], line_no));
        check_record(skeleton, rec);
        dataset.records.push_back(std::move(rec));
    }
    return dataset;
}

void save_dataset_csv(const std::string& path, const Skeleton& skeleton, const Dataset& dataset) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");

    std::string header;
    std::size_t node = 0;
    for (const auto& space : skeleton.input_spaces()) {
        ++node;
        if (space.value_columns() == 1) {
            header += "x" + std::to_string(node) + ",";
        } else {
            for (std::uint32_t c = 1; c <= space.value_columns(); ++c)
                header += "x" + std::to_string(node) + "_" + std::to_string(c) + ",";
        }
    }
    if (dataset.label_dim == 1) {
        header += "label,";
    } else {
        for (std::size_t k = 1; k <= dataset.label_dim; ++k)
            header += "label_" + std::to_string(k) + ",";
    }
    if (!header.empty()) header.pop_back();
    out << header << "\n";

    for (std::size_t r = 0; r < dataset.records.size(); ++r) {
        const auto& rec = dataset.records[r];
        std::string row;
        for (std::size_t i = 0; i < rec.coords.size(); ++i) {
            const auto& space = skeleton.input_spaces()[i];
            switch (space.kind()) {
            case SpaceKind::binary:
                row += format_double(std::get<double>(rec.coords[i]));
                break;
            case SpaceKind::circle: {
                auto z = std::get<std::complex<double>>(rec.coords[i]);
                row += format_double(std::atan2(z.imag(), z.real()));
                break;
            }
            case SpaceKind::categorical:
                row += std::to_string(std::get<std::uint32_t>(rec.coords[i]));
                break;
            default: {
                const auto& v = std::get<std::vector<double>>(rec.coords[i]);
                for (std::size_t c = 0; c < v.size(); ++c) {
                    row += format_double(v[c]);
                    if (c + 1 < v.size()) row += ",";
                }
                break;
            }
            }
            row += ",";
        }
        for (std::size_t k = 0; k < dataset.label_dim; ++k) {
            row += format_double(dataset.labels[r * dataset.label_dim + k]);
            row += ",";
        }
        if (!row.empty()) row.pop_back();
        out << row << "\n";
    }
    if (!out) throw IoError("dataset write failed");
}

void write_matrix_csv(const std::string& path, const std::vector<double>& matrix, std::size_t n,
                      const std::vector<std::string>& names) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    std::string header = "node";
    for (std::size_t j = 0; j < n; ++j) header += "," + names[j];
    out << header << "\n";
    for (std::size_t i = 0; i < n; ++i) {
        out << names[i];
        for (std::size_t j = 0; j < n; ++j) out << "," << format_double(matrix[i * n + j]);
        out << "\n";
    }
    if (!out) throw IoError("matrix write failed");
}

void write_embedding_csv(const std::string& path, const std::vector<Embedding>& embeddings) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    if (embeddings.empty()) throw UsageError("write_embedding_csv: no embeddings");
    const std::size_t dim = embeddings.front().values.size();
    std::string header;
    for (std::size_t d = 1; d <= dim; ++d) {
        header += "f" + std::to_string(d);
        if (d < dim) header += ",";
    }
    out << header << "\n";
    for (const auto& e : embeddings) {
        if (!e.real_mode) throw UsageError("write_embedding_csv: embeddings must be real mode");
        for (std::size_t d = 0; d < dim; ++d) {
            out << format_double(e.values[d].real());
            out << (d + 1 < dim ? "," : "\n");
        }
    }
    if (!out) throw IoError("embedding write failed");
}

void write_kernel_csv(const std::string& path, const std::vector<double>& kernel_matrix,
                      std::size_t n) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "i,j,value\n";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out << i << "," << j << "," << format_double(kernel_matrix[i * n + j]) << "\n";
    if (!out) throw IoError("kernel write failed");
}

void write_predictions_csv(const std::string& path, const std::vector<double>& predictions,
                           std::size_t rows, std::size_t cols) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    std::string header;
    for (std::size_t k = 1; k <= cols; ++k) {
        header += "pred_" + std::to_string(k);
        if (k < cols) header += ",";
    }
    out << header << "\n";
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = 0; k < cols; ++k) {
            out << format_double(predictions[r * cols + k]);
            out << (k + 1 < cols ? "," : "\n");
        }
    }
    if (!out) throw IoError("predictions write failed");
}

} // namespace compfeat
