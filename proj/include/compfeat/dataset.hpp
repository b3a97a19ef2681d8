#pragma once

#include "compfeat/embedding.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace compfeat {

// Rows of the product input space, optionally with labels (m x label_dim,
// row-major).
struct Dataset {
    std::vector<InputRecord> records;
    std::vector<double> labels;
    std::size_t label_dim = 0;

    bool has_labels() const { return label_dim > 0; }
    std::size_t size() const { return records.size(); }
};

/// Synthetic records, one coordinate per input node, drawn per base space
/// (uniform for binary/circle/categorical/sphere, standard normal for
/// gaussian). locality in [0,1) correlates adjacent scalar coordinates
/// through a latent AR(1) Gaussian field, so nearby input nodes co-vary.
std::vector<InputRecord> synth_records(const Skeleton& skeleton, std::size_t count,
                                       std::uint64_t seed, double locality = 0.0);

// CSV layout: one header row, then one row per record. Scalar spaces use
// one column ("x3"); vector spaces use extent() columns ("x3_1".."x3_d").
// Circle coordinates travel as phases in radians. An optional trailing
// label block uses "label" (single) or "label_1".."label_t".
// Sphere rows more than 1e-6 off unit norm are renormalized with a warning
// on stderr; parse failures throw ParseError.
Dataset load_dataset_csv(const std::string& path, const Skeleton& skeleton);
void save_dataset_csv(const std::string& path, const Skeleton& skeleton, const Dataset& dataset);

/// Header `i,j,value` rows for an n x n matrix (row-major).
void write_matrix_csv(const std::string& path, const std::vector<double>& matrix, std::size_t n,
                      const std::vector<std::string>& names);

/// One row per record, one column per registry entry (real mode).
void write_embedding_csv(const std::string& path, const std::vector<Embedding>& embeddings);

/// One row per record pair: `i,j,value` (exact or empirical kernels).
void write_kernel_csv(const std::string& path, const std::vector<double>& kernel_matrix,
                      std::size_t n);

void write_predictions_csv(const std::string& path, const std::vector<double>& predictions,
                           std::size_t rows, std::size_t cols);

} // namespace compfeat
