#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "edgelbp/edms.hpp"
#include "edgelbp/imaging.hpp"
#include "edgelbp/moments.hpp"

namespace edgelbp {

enum class Scheme { Edms, Lbp, Glcm, Moment, Proposed, GlcmEdms, LbpMoment };

inline constexpr std::array<Scheme, 7> kAllSchemes = {Scheme::Edms,     Scheme::Lbp,      Scheme::Glcm,
                                                      Scheme::Moment,   Scheme::Proposed, Scheme::GlcmEdms,
                                                      Scheme::LbpMoment};

/// Canonical upper-case names: EDMS, LBP, GLCM, MOMENT, PROPOSED,
/// GLCM-EDMS, LBP-MOMENT.
std::string_view scheme_name(Scheme scheme);

/// Case-insensitive; accepts '_' for '-'.
std::optional<Scheme> parse_scheme(std::string_view name);

int scheme_dims(Scheme scheme);

/// Single-descriptor parts of a scheme in concatenation order (a singleton
/// scheme is its own only part).
std::vector<Scheme> scheme_parts(Scheme scheme);

struct ExtractionConfig {
  int glcm_levels = 16;
  MomentScaling moment_scaling = MomentScaling::SignedLog;
  EdgeDirectionMode edge_direction = EdgeDirectionMode::ArgmaxIndex;
};

struct FeatureVector {
  Scheme scheme = Scheme::Edms;
  Eigen::VectorXd values;

  Eigen::Index dims() const { return values.size(); }
};

/// Runs the extraction pipeline for one image. EDMS and MOMENT work on the
/// Otsu-binarized image; LBP and GLCM on the gray image. Composite schemes
/// concatenate their parts, first-named part first.
FeatureVector extract(const GrayImage& image, Scheme scheme, const ExtractionConfig& config = {});

/// Per-dimension z-scoring fitted on training vectors. Standard deviations
/// use the population convention and are floored to 1 below 1e-12.
struct Normalizer {
  Scheme scheme = Scheme::Edms;
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;

  std::string to_json() const;
  static Normalizer from_json(std::string_view text);
};

/// Throws Errc::InvalidArgument for fewer than two vectors and
/// Errc::SchemeMismatch for mixed schemes or lengths.
Normalizer fit_normalizer(std::span<const FeatureVector> train);

/// Row-wise variant: each row of `rows` is one training vector.
Normalizer fit_normalizer(Scheme scheme, const Eigen::Ref<const Eigen::MatrixXd>& rows);

/// (v - mean) / stddev. Throws Errc::SchemeMismatch on scheme or length
/// mismatch.
FeatureVector apply_normalizer(const Normalizer& n, const FeatureVector& v);

FeatureVector invert_normalizer(const Normalizer& n, const FeatureVector& v);

/// Row-wise application to a sample-per-row matrix.
Eigen::MatrixXd apply_normalizer(const Normalizer& n, const Eigen::Ref<const Eigen::MatrixXd>& rows);

/// One CSV row: `sample_id,label,scheme,f0,...,f{d-1}`.
struct FeatureRow {
  std::string sample_id;
  std::string label;
  FeatureVector features;
};

/// Header plus one line per row; values printed with 9 significant digits.
std::string format_feature_csv(Scheme scheme, std::span<const FeatureRow> rows);

/// Inverse of `format_feature_csv`. Throws Errc::InvalidArgument on a
/// malformed file and Errc::SchemeMismatch on inconsistent scheme columns.
std::vector<FeatureRow> parse_feature_csv(std::string_view text);

}  // namespace edgelbp
