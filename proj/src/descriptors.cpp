#include "edgelbp/descriptors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "edgelbp/errors.hpp"
#include "edgelbp/glcm.hpp"
#include "edgelbp/lbp.hpp"

namespace edgelbp {

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::Edms: return "EDMS";
    case Scheme::Lbp: return "LBP";
    case Scheme::Glcm: return "GLCM";
    case Scheme::Moment: return "MOMENT";
    case Scheme::Proposed: return "PROPOSED";
    case Scheme::GlcmEdms: return "GLCM-EDMS";
    case Scheme::LbpMoment: return "LBP-MOMENT";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  std::string norm;
  for (char c : name) norm += c == '_' ? '-' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (Scheme s : kAllSchemes) {
    if (scheme_name(s) == norm) return s;
  }
  return std::nullopt;
}

std::vector<Scheme> scheme_parts(Scheme scheme) {
  switch (scheme) {
    case Scheme::Proposed: return {Scheme::Edms, Scheme::Lbp};
    case Scheme::GlcmEdms: return {Scheme::Glcm, Scheme::Edms};
    case Scheme::LbpMoment: return {Scheme::Lbp, Scheme::Moment};
    default: return {scheme};
  }
}

int scheme_dims(Scheme scheme) {
  switch (scheme) {
    case Scheme::Edms: return EdmsFeatures::kDims;
    case Scheme::Lbp: return 256;
    case Scheme::Glcm: return 4 * GlcmFeatures<double>::kDims;
    case Scheme::Moment: return 7;
    default: break;
  }
  int dims = 0;
  for (Scheme part : scheme_parts(scheme)) dims += scheme_dims(part);
  return dims;
}

FeatureVector extract(const GrayImage& image, Scheme scheme, const ExtractionConfig& config) {
  const std::vector<Scheme> parts = scheme_parts(scheme);
  std::optional<BinaryImage> binary;
  const auto binarized = [&]() -> const BinaryImage& {
    if (!binary) binary = binarize_otsu(image);
    return *binary;
  };

  FeatureVector out;
  out.scheme = scheme;
  out.values.resize(scheme_dims(scheme));
  Eigen::Index at = 0;
  for (Scheme part : parts) {
    Eigen::VectorXd block;
    switch (part) {
      case Scheme::Edms: block = edms_descriptor(binarized(), config.edge_direction).to_vector(); break;
      case Scheme::Lbp: block = lbp_histogram(image); break;
      case Scheme::Glcm: block = glcm_descriptor(image, config.glcm_levels); break;
      case Scheme::Moment: block = moment_descriptor(binarized(), config.moment_scaling); break;
      default: break;
    }
    out.values.segment(at, block.size()) = block;
    at += block.size();
  }
  return out;
}

Normalizer fit_normalizer(Scheme scheme, const Eigen::Ref<const Eigen::MatrixXd>& rows) {
  if (rows.rows() < 2) throw Error(Errc::InvalidArgument, "normalizer needs at least two training vectors");
  if (rows.cols() != scheme_dims(scheme)) {
    throw Error(Errc::SchemeMismatch, "training vectors have " + std::to_string(rows.cols()) + " dims, scheme " +
                                          std::string(scheme_name(scheme)) + " expects " +
                                          std::to_string(scheme_dims(scheme)));
  }
  Normalizer n;
  n.scheme = scheme;
  n.mean = rows.colwise().mean().transpose();
  const Eigen::MatrixXd centered = rows.rowwise() - n.mean.transpose();
  n.stddev = (centered.array().square().colwise().sum() / static_cast<double>(rows.rows())).sqrt().transpose();
  n.stddev = (n.stddev.array() < 1e-12).select(1.0, n.stddev);
  return n;
}

Normalizer fit_normalizer(std::span<const FeatureVector> train) {
  if (train.size() < 2) throw Error(Errc::InvalidArgument, "normalizer needs at least two training vectors");
  const Scheme scheme = train.front().scheme;
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(train.size()), train.front().dims());
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train[i].scheme != scheme || train[i].dims() != rows.cols()) {
      throw Error(Errc::SchemeMismatch, "cannot fit one normalizer over " + std::string(scheme_name(scheme)) +
                                            " and " + std::string(scheme_name(train[i].scheme)) + " vectors");
    }
    rows.row(static_cast<Eigen::Index>(i)) = train[i].values.transpose();
  }
  return fit_normalizer(scheme, rows);
}

namespace {

void check_compatible(const Normalizer& n, Scheme scheme, Eigen::Index dims) {
  if (scheme != n.scheme || dims != n.mean.size()) {
    throw Error(Errc::SchemeMismatch, "normalizer fitted for " + std::string(scheme_name(n.scheme)) + " (" +
                                          std::to_string(n.mean.size()) + " dims) applied to " +
                                          std::string(scheme_name(scheme)) + " (" + std::to_string(dims) + " dims)");
  }
}

}  // namespace

FeatureVector apply_normalizer(const Normalizer& n, const FeatureVector& v) {
  check_compatible(n, v.scheme, v.dims());
  return {v.scheme, ((v.values - n.mean).array() / n.stddev.array()).matrix()};
}

FeatureVector invert_normalizer(const Normalizer& n, const FeatureVector& v) {
  check_compatible(n, v.scheme, v.dims());
  return {v.scheme, (v.values.array() * n.stddev.array()).matrix() + n.mean};
}

Eigen::MatrixXd apply_normalizer(const Normalizer& n, const Eigen::Ref<const Eigen::MatrixXd>& rows) {
  check_compatible(n, n.scheme, rows.cols());
  return ((rows.rowwise() - n.mean.transpose()).array().rowwise() / n.stddev.transpose().array()).matrix();
}

std::string Normalizer::to_json() const {
  nlohmann::json j;
  j["format_version"] = 1;
  j["scheme"] = std::string(scheme_name(scheme));
  j["mean"] = std::vector<double>(mean.data(), mean.data() + mean.size());
  j["stddev"] = std::vector<double>(stddev.data(), stddev.data() + stddev.size());
  return j.dump();
}

Normalizer Normalizer::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format_version").get<int>() != 1) throw Error(Errc::InvalidArgument, "unsupported normalizer version");
    const auto scheme = parse_scheme(j.at("scheme").get<std::string>());
    if (!scheme) throw Error(Errc::InvalidArgument, "unknown scheme in normalizer");
    const auto mean = j.at("mean").get<std::vector<double>>();
    const auto stddev = j.at("stddev").get<std::vector<double>>();
    if (mean.size() != stddev.size() || static_cast<int>(mean.size()) != scheme_dims(*scheme)) {
      throw Error(Errc::SchemeMismatch, "normalizer length does not match its scheme");
    }
    Normalizer n;
    n.scheme = *scheme;
    n.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    n.stddev = Eigen::Map<const Eigen::VectorXd>(stddev.data(), static_cast<Eigen::Index>(stddev.size()));
    return n;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("malformed normalizer: ") + e.what());
  }
}

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

}  // namespace

std::string format_feature_csv(Scheme scheme, std::span<const FeatureRow> rows) {
  const int dims = scheme_dims(scheme);
  std::string out = "sample_id,label,scheme";
  for (int k = 0; k < dims; ++k) out += ",f" + std::to_string(k);
  out += '\n';
  char buf[64];
  for (const FeatureRow& row : rows) {
    if (row.features.scheme != scheme || row.features.dims() != dims) {
      throw Error(Errc::SchemeMismatch, "row " + row.sample_id + " is " +
                                            std::string(scheme_name(row.features.scheme)) + ", file is " +
                                            std::string(scheme_name(scheme)));
    }
    out += csv_field(row.sample_id);
    out += ',';
    out += csv_field(row.label);
    out += ',';
    out += scheme_name(scheme);
    for (Eigen::Index k = 0; k < dims; ++k) {
      const double v = row.features.values(k) == 0.0 ? 0.0 : row.features.values(k);  // no "-0"
      std::snprintf(buf, sizeof buf, ",%.9g", v);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::vector<FeatureRow> parse_feature_csv(std::string_view text) {
  std::vector<FeatureRow> rows;
  std::size_t pos = 0;
  bool header = true;
  std::optional<Scheme> file_scheme;
  Eigen::Index dims = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (header) {
      if (fields.size() < 3 || fields[0] != "sample_id" || fields[1] != "label" || fields[2] != "scheme") {
        throw Error(Errc::InvalidArgument, "feature CSV header must start with sample_id,label,scheme");
      }
      dims = static_cast<Eigen::Index>(fields.size() - 3);
      header = false;
      continue;
    }
    if (static_cast<Eigen::Index>(fields.size()) != dims + 3) {
      throw Error(Errc::InvalidArgument, "feature CSV line " + std::to_string(line_no) + " has " +
                                             std::to_string(fields.size()) + " fields");
    }
    const auto scheme = parse_scheme(fields[2]);
    if (!scheme) throw Error(Errc::InvalidArgument, "unknown scheme '" + fields[2] + "'");
    if (file_scheme && *file_scheme != *scheme) {
      throw Error(Errc::SchemeMismatch, "feature CSV mixes " + std::string(scheme_name(*file_scheme)) + " and " +
                                            std::string(scheme_name(*scheme)));
    }
    if (scheme_dims(*scheme) != dims) {
      throw Error(Errc::SchemeMismatch, "feature CSV has " + std::to_string(dims) + " columns, scheme " +
                                            fields[2] + " expects " + std::to_string(scheme_dims(*scheme)));
    }
    file_scheme = scheme;
    FeatureRow row{fields[0], fields[1], {*scheme, Eigen::VectorXd(dims)}};
    for (Eigen::Index k = 0; k < dims; ++k) {
      const std::string& f = fields[static_cast<std::size_t>(k) + 3];
      char* endp = nullptr;
      row.features.values(k) = std::strtod(f.c_str(), &endp);
      if (f.empty() || endp != f.c_str() + f.size()) {
        throw Error(Errc::InvalidArgument, "bad number '" + f + "' on line " + std::to_string(line_no));
      }
    }
    rows.push_back(std::move(row));
  }
  if (header) throw Error(Errc::InvalidArgument, "feature CSV is empty");
  return rows;
}

}  // namespace edgelbp
